import { ApiClient, ApiError, NetworkError } from "./api.js";
import { DraftStorage, clearDraft, loadDraft, saveDraft } from "./drafts.js";
import { Assessment, ResponseSetBody, ScoreResult } from "./types.js";

export interface QuizIdentity {
  userId: string;
  groupId: string;
}

export type SubmitOutcome =
  | { kind: "accepted"; scores: ScoreResult["scores"] }
  | { kind: "rejected"; status: number; detail: unknown; retryable: true }
  | { kind: "offline"; message: string; retryable: true };

/**
 * One employee working through one assessment. Answers are validated with
 * the same rules the server enforces (known item, in-range choice) and are
 * persisted to a local draft after every change, so an abandoned or failed
 * session can resume exactly where it stopped.
 */
export class QuizSession {
  readonly assessment: Assessment;
  private readonly identity: QuizIdentity;
  private readonly storage: DraftStorage | undefined;
  private answers: Record<string, number> = {};
  private freeText: Record<string, string> = {};

  constructor(assessment: Assessment, identity: QuizIdentity, storage?: DraftStorage) {
    this.assessment = assessment;
    this.identity = identity;
    this.storage = storage;
    const draft = this.storage
      ? loadDraft(assessment.assessment_id, this.storage)
      : loadDraft(assessment.assessment_id);
    if (draft && draft.assessmentId === assessment.assessment_id) {
      // drop any draft entries that no longer match the served assessment
      for (const [itemId, choice] of Object.entries(draft.answers)) {
        const item = assessment.items.find((i) => i.item_id === itemId);
        if (item && choice >= 0 && choice < item.choices.length) {
          this.answers[itemId] = choice;
        }
      }
      this.freeText = { ...draft.freeText };
    }
  }

  answer(itemId: string, choiceIndex: number): void {
    const item = this.assessment.items.find((i) => i.item_id === itemId);
    if (!item) {
      throw new Error(`unknown item ${itemId}`);
    }
    if (!Number.isInteger(choiceIndex) || choiceIndex < 0 || choiceIndex >= item.choices.length) {
      throw new Error(`choice ${choiceIndex} out of range for ${itemId}`);
    }
    this.answers[itemId] = choiceIndex;
    this.persist();
  }

  addFreeText(itemId: string, text: string): void {
    if (!this.assessment.items.some((i) => i.item_id === itemId)) {
      throw new Error(`unknown item ${itemId}`);
    }
    this.freeText[itemId] = text;
    this.persist();
  }

  answerOf(itemId: string): number | undefined {
    return this.answers[itemId];
  }

  progress(): { answered: number; total: number } {
    return {
      answered: Object.keys(this.answers).length,
      total: this.assessment.items.length
    };
  }

  buildResponse(now: () => Date = () => new Date()): ResponseSetBody {
    return {
      user_id: this.identity.userId,
      group_id: this.identity.groupId,
      assessment_id: this.assessment.assessment_id,
      answers: { ...this.answers },
      free_text: { ...this.freeText },
      submitted_at: now().toISOString()
    };
  }

  /**
   * Submit the current answers. On success the draft is cleared and the
   * server's per-tag scores are returned; on any failure the draft stays
   * put so the user can retry without losing work.
   */
  async submit(api: ApiClient, now?: () => Date): Promise<SubmitOutcome> {
    const body = this.buildResponse(now);
    try {
      const result = await api.postResponse(body);
      if (this.storage) {
        clearDraft(this.assessment.assessment_id, this.storage);
      } else {
        clearDraft(this.assessment.assessment_id);
      }
      return { kind: "accepted", scores: result.scores };
    } catch (err) {
      if (err instanceof ApiError) {
        return { kind: "rejected", status: err.status, detail: err.detail, retryable: true };
      }
      if (err instanceof NetworkError) {
        return { kind: "offline", message: err.message, retryable: true };
      }
      throw err;
    }
  }

  private persist(): void {
    if (this.storage) {
      saveDraft(this.assessment.assessment_id, this.answers, this.freeText, this.storage);
    } else {
      saveDraft(this.assessment.assessment_id, this.answers, this.freeText);
    }
  }
}

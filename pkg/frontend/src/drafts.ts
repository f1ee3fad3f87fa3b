import { z } from "zod";

// Quiz answers survive reloads and failed submissions via a local draft,
// keyed by assessment. Storage is injectable so tests run without a DOM.

const DraftSchema = z.object({
  version: z.literal("v1"),
  assessmentId: z.string(),
  savedAtISO: z.string(),
  answers: z.record(z.string(), z.number().int()),
  freeText: z.record(z.string(), z.string())
});
export type AnswerDraft = z.infer<typeof DraftSchema>;

export type DraftStorage = Pick<Storage, "getItem" | "setItem" | "removeItem">;

export function memoryStorage(): DraftStorage {
  const data = new Map<string, string>();
  return {
    getItem: (key) => data.get(key) ?? null,
    setItem: (key, value) => {
      data.set(key, value);
    },
    removeItem: (key) => {
      data.delete(key);
    }
  };
}

function defaultStorage(): DraftStorage {
  if (typeof localStorage !== "undefined") return localStorage;
  return memoryStorage();
}

export function draftKey(assessmentId: string): string {
  return `incat:quiz:draft:v1:${assessmentId}`;
}

export function loadDraft(assessmentId: string, storage: DraftStorage = defaultStorage()): AnswerDraft | null {
  try {
    const raw = storage.getItem(draftKey(assessmentId));
    if (!raw) return null;
    return DraftSchema.parse(JSON.parse(raw));
  } catch {
    return null;
  }
}

export function saveDraft(
  assessmentId: string,
  answers: Record<string, number>,
  freeText: Record<string, string>,
  storage: DraftStorage = defaultStorage()
): void {
  try {
    const draft: AnswerDraft = {
      version: "v1",
      assessmentId,
      savedAtISO: new Date().toISOString(),
      answers,
      freeText
    };
    storage.setItem(draftKey(assessmentId), JSON.stringify(draft));
  } catch {
    // storage full or unavailable; drafts are best-effort
  }
}

export function clearDraft(assessmentId: string, storage: DraftStorage = defaultStorage()): void {
  try {
    storage.removeItem(draftKey(assessmentId));
  } catch {
    // ignore
  }
}

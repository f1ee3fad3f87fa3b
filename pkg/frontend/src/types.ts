import { z } from "zod";

// Schemas mirror the server's JSON payloads exactly; the UI trusts the
// server for every number and only validates shape.

export const MetricVectorSchema = z.record(z.string(), z.string());

export const ThemeSchema = z.object({
  theme_id: z.string(),
  source_cluster: z.number().int(),
  mode: MetricVectorSchema,
  count: z.number().int(),
  tags: z.array(z.string())
});
export type Theme = z.infer<typeof ThemeSchema>;

export const ThemesPayloadSchema = z.array(ThemeSchema);

export const ClusterModelSchema = z.object({
  k: z.number().int(),
  init: z.string(),
  seed: z.number().int(),
  cost: z.number(),
  iterations: z.number().int(),
  modes: z.array(z.array(z.string())),
  assignments: z.array(z.number().int())
});

export const ClustersPayloadSchema = z.object({
  model: ClusterModelSchema,
  profile: z
    .array(z.object({ mode: MetricVectorSchema, count: z.number().int() }))
    .nullable()
});
export type ClustersPayload = z.infer<typeof ClustersPayloadSchema>;

export const ElbowPayloadSchema = z.object({
  entries: z.array(
    z.object({
      k: z.number().int(),
      cost: z.number(),
      restarts: z.number().int(),
      seed: z.number().int()
    })
  )
});
export type ElbowPayload = z.infer<typeof ElbowPayloadSchema>;

export const CombosPayloadSchema = z.object({
  possible: z.number().int(),
  observed: z.number().int(),
  total_rows: z.number().int(),
  coverage_curve: z.array(z.tuple([z.number(), z.number()])),
  combos: z.array(z.object({ vector: MetricVectorSchema, count: z.number().int() }))
});
export type CombosPayload = z.infer<typeof CombosPayloadSchema>;

export const AssessmentItemSchema = z.object({
  item_id: z.string(),
  prompt: z.string(),
  choices: z.array(z.string()).min(2),
  correct_index: z.number().int(),
  tags: z.array(z.string()).min(1)
});
export type AssessmentItem = z.infer<typeof AssessmentItemSchema>;

export const AssessmentSchema = z.object({
  assessment_id: z.string(),
  theme_id: z.string(),
  items: z.array(AssessmentItemSchema).min(1)
});
export type Assessment = z.infer<typeof AssessmentSchema>;

export interface ResponseSetBody {
  user_id: string;
  group_id: string;
  assessment_id: string;
  answers: Record<string, number>;
  free_text: Record<string, string>;
  submitted_at: string;
}

export const ScoreResultSchema = z.object({
  stored: z.boolean(),
  scores: z.record(
    z.string(),
    z.object({ correct: z.number().int(), attempted: z.number().int() })
  )
});
export type ScoreResult = z.infer<typeof ScoreResultSchema>;

export const ReadinessPayloadSchema = z.object({
  matrix: z.record(z.string(), z.record(z.string(), z.number())),
  support: z.record(z.string(), z.record(z.string(), z.number())),
  ranking: z.record(z.string(), z.array(z.string()))
});
export type ReadinessPayload = z.infer<typeof ReadinessPayloadSchema>;

export const TargetingPayloadSchema = z.object({
  theme_id: z.string(),
  quota: z.number().int(),
  groups: z.array(z.string())
});
export type TargetingPayload = z.infer<typeof TargetingPayloadSchema>;

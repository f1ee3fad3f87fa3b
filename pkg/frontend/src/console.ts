import {
  ClustersPayload,
  CombosPayload,
  ElbowPayload,
  ReadinessPayload,
  ScoreResult,
  TargetingPayload,
  Theme
} from "./types.js";

// Display-model builders for the analyst console. They only rearrange
// served payloads; every rendered number is the payload number verbatim
// (String(...) of the JSON value), so what the analyst sees is exactly
// what the pipeline computed.

export function displayNumber(value: number): string {
  return String(value);
}

export interface TableModel {
  columns: string[];
  rows: string[][];
  empty: boolean;
  emptyMessage?: string;
}

export function themesTable(themes: Theme[]): TableModel {
  if (themes.length === 0) {
    return {
      columns: [],
      rows: [],
      empty: true,
      emptyMessage: "No themes yet. Run the clustering pipeline first."
    };
  }
  const featureNames = Object.keys(themes[0]!.mode);
  return {
    columns: ["theme", ...featureNames, "count", "tags"],
    rows: themes.map((t) => [
      t.theme_id,
      ...featureNames.map((f) => t.mode[f] ?? ""),
      displayNumber(t.count),
      t.tags.join(", ")
    ]),
    empty: false
  };
}

export function clusterProfileTable(payload: ClustersPayload): TableModel {
  if (!payload.profile || payload.profile.length === 0) {
    return {
      columns: [],
      rows: [],
      empty: true,
      emptyMessage: "No cluster profile available for the stored model."
    };
  }
  const featureNames = Object.keys(payload.profile[0]!.mode);
  return {
    columns: [...featureNames, "count"],
    rows: payload.profile.map((entry) => [
      ...featureNames.map((f) => entry.mode[f] ?? ""),
      displayNumber(entry.count)
    ]),
    empty: false
  };
}

export interface SeriesPoint {
  x: number;
  y: number;
  label: string;
}

export interface ElbowView {
  points: SeriesPoint[];
  runningMin: SeriesPoint[];
  empty: boolean;
}

export function elbowView(payload: ElbowPayload | null): ElbowView {
  if (!payload || payload.entries.length === 0) {
    return { points: [], runningMin: [], empty: true };
  }
  const points = payload.entries.map((e) => ({
    x: e.k,
    y: e.cost,
    label: displayNumber(e.cost)
  }));
  // the running minimum is a presentation overlay: each plotted value is
  // one of the served costs, never a new number
  let best = Number.POSITIVE_INFINITY;
  const runningMin = payload.entries.map((e) => {
    best = Math.min(best, e.cost);
    return { x: e.k, y: best, label: displayNumber(best) };
  });
  return { points, runningMin, empty: false };
}

export interface CoverageView {
  possible: string;
  observed: string;
  totalRows: string;
  points: SeriesPoint[];
  topSixteen: string | null;
  empty: boolean;
}

export function coverageView(payload: CombosPayload): CoverageView {
  const empty = payload.total_rows === 0;
  const atSixteen = payload.coverage_curve.find(([m]) => m === 16);
  return {
    possible: displayNumber(payload.possible),
    observed: displayNumber(payload.observed),
    totalRows: displayNumber(payload.total_rows),
    points: payload.coverage_curve.map(([m, fraction]) => ({
      x: m,
      y: fraction,
      label: displayNumber(fraction)
    })),
    topSixteen: atSixteen ? displayNumber(atSixteen[1]) : null,
    empty
  };
}

export interface HeatmapCell {
  group: string;
  theme: string;
  score: number;
  display: string;
  support: string;
}

export interface ReadinessView {
  groups: string[];
  themes: string[];
  cells: HeatmapCell[];
  ranking: Record<string, string[]>;
  mostVulnerable: Record<string, string>;
  empty: boolean;
}

export function readinessView(payload: ReadinessPayload): ReadinessView {
  const groups = Object.keys(payload.matrix).sort();
  const themes = [...new Set(groups.flatMap((g) => Object.keys(payload.matrix[g] ?? {})))].sort();
  const cells: HeatmapCell[] = [];
  for (const group of groups) {
    for (const theme of themes) {
      const score = payload.matrix[group]?.[theme];
      if (score === undefined) continue;
      cells.push({
        group,
        theme,
        score,
        display: displayNumber(score),
        support: displayNumber(payload.support[group]?.[theme] ?? 0)
      });
    }
  }
  const mostVulnerable: Record<string, string> = {};
  for (const [theme, ordered] of Object.entries(payload.ranking)) {
    if (ordered.length > 0) mostVulnerable[theme] = ordered[0]!;
  }
  return {
    groups,
    themes,
    cells,
    ranking: payload.ranking,
    mostVulnerable,
    empty: cells.length === 0
  };
}

export interface TargetingView {
  themeId: string;
  quota: string;
  orderedGroups: string[];
  empty: boolean;
}

export function targetingView(payload: TargetingPayload): TargetingView {
  return {
    themeId: payload.theme_id,
    quota: displayNumber(payload.quota),
    orderedGroups: [...payload.groups],
    empty: payload.groups.length === 0
  };
}

export interface ScoreLine {
  tag: string;
  correct: string;
  attempted: string;
}

export function confirmationLines(scores: ScoreResult["scores"]): ScoreLine[] {
  return Object.keys(scores)
    .sort()
    .map((tag) => ({
      tag,
      correct: displayNumber(scores[tag]!.correct),
      attempted: displayNumber(scores[tag]!.attempted)
    }));
}

// JSON shapes exchanged with the analysis server. These mirror the HTTP
// API exactly; the UI adds nothing on top and never recomputes statistics.

export interface RangeClause {
  feature: string;
  type: "range";
  min?: number;
  minInclusive?: boolean;
  max?: number;
  maxInclusive?: boolean;
}

export interface SetClause {
  feature: string;
  type: "set";
  values: string[];
}

export type Clause = RangeClause | SetClause;

export interface FilterSpec {
  clauses: Clause[];
}

export interface MatchConfigBody {
  method?: "euclidean_nn" | "mahalanobis" | "propensity";
  covariates?: string[];
  cfSize?: number;
  indexPolicy?: "auto" | "brute_force" | "spatial_index";
  standardize?: boolean;
  allowOutcomeCovariate?: boolean;
}

export interface AnalysisRequest {
  filter: FilterSpec;
  outcome: string;
  match?: MatchConfigBody;
  bins?: number;
}

export interface NumericFeature {
  name: string;
  kind: "numeric";
  count: number;
  min: number;
  max: number;
  mean: number;
  std: number;
}

export interface CategoricalFeature {
  name: string;
  kind: "categorical";
  count: number;
  categories: Record<string, number>;
}

export type FeatureInfo = NumericFeature | CategoricalFeature;

export interface SessionInfo {
  sessionId: string;
  createdAt?: string;
  rowCount: number;
  droppedRowCount?: number;
  features: FeatureInfo[];
}

export interface FixtureEntry {
  name: string;
  description: string;
}

export interface Histogram {
  binEdges: number[];
  countsA: number[];
  countsB: number[];
}

export interface GroupComparison {
  outcome: string;
  groupAMean: number;
  groupBMean: number;
  meanDifference: number;
  cohensD: number | null;
  cohensDDefined: boolean;
  ksStatistic: number;
  groupASize: number;
  groupBSize: number;
  histogram: Histogram;
}

export interface BalanceEntry {
  feature: string;
  smdNaive: number | null;
  smdCounterfactual: number | null;
}

export interface AnalysisReport {
  reportVersion: number;
  outcome: string;
  filter: FilterSpec;
  match: Record<string, unknown>;
  partition: {
    includedCount: number;
    excludedCount: number;
    counterfactualCount: number;
  };
  naive: GroupComparison;
  counterfactual: GroupComparison;
  balance: {
    perCovariate: BalanceEntry[];
    maxSmdNaive: number | null;
    maxSmdCf: number | null;
    smdDefined: boolean;
  };
  support: {
    ratio: number | null;
    class: "weakened" | "preserved" | "indeterminate";
    naiveGapNegligible: boolean;
    thresholds: {
      weakenedBelow: number;
      preservedAtLeast: number;
      gapEpsilon: number;
    };
  };
}

export interface ErrorDetail {
  code: string;
  message: string;
  position?: number;
}

export type ChiralityTag = 'NA' | 'R' | 'S';

/** NA -> 0, R -> 1, S -> 2. */
export const LABEL_IDS: Record<ChiralityTag, number> = { NA: 0, R: 1, S: 2 };

export type SampleKind = 'simple' | 'crossed' | 'classic';

export interface LoadedSample {
  sampleType: SampleKind;
  distance: number;
  sampleSeed: number;
  species: number[];
  positions: [number, number, number][];
  edges: [number, number][];
  chiralCenter: number;
  labels: ChiralityTag[];
  stpValue: number;
  /** labels mapped through LABEL_IDS, aligned by node index. */
  labelIds: number[];
  /** true exactly at the chiral center. */
  centerMask: boolean[];
}

export interface DatasetConfig {
  sampleType: SampleKind;
  distance: number;
  speciesRange: number;
  noise: boolean;
  count: number;
  masterSeed: number;
}

export interface Manifest {
  formatVersion: string;
  config: DatasetConfig;
  splitIndices: { train: number[]; val: number[]; test: number[] };
  classCounts: { NA: number; R: number; S: number };
  classWeights: [number, number, number];
  weightConstant: number;
}

export interface DatasetSummary {
  count: number;
  node_total: number;
  edge_total_directed: number;
  n_na: number;
  n_r: number;
  n_s: number;
}

export class FormatVersionError extends Error {}

export class MalformedRecordError extends Error {
  readonly lineNumber?: number;

  constructor(message: string, lineNumber?: number) {
    super(lineNumber === undefined ? message : `line ${lineNumber}: ${message}`);
    this.lineNumber = lineNumber;
  }
}

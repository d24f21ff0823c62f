import { createReadStream } from 'node:fs';
import { readFile } from 'node:fs/promises';
import { createInterface } from 'node:readline';

import {
  ChiralityTag,
  DatasetSummary,
  FormatVersionError,
  LABEL_IDS,
  LoadedSample,
  MalformedRecordError,
  Manifest,
  SampleKind,
} from './types.js';

export const SUPPORTED_FORMAT_VERSION = '1';

const SAMPLE_KINDS: SampleKind[] = ['simple', 'crossed', 'classic'];
const TAGS: ChiralityTag[] = ['NA', 'R', 'S'];

function asNumber(value: unknown, what: string, line?: number): number {
  if (typeof value !== 'number' || !Number.isFinite(value)) {
    throw new MalformedRecordError(`${what} must be a finite number`, line);
  }
  return value;
}

function asInt(value: unknown, what: string, line?: number): number {
  if (typeof value !== 'number' || !Number.isInteger(value)) {
    throw new MalformedRecordError(`${what} must be an integer`, line);
  }
  return value;
}

function asIntArray(value: unknown, what: string, line?: number): number[] {
  if (!Array.isArray(value)) {
    throw new MalformedRecordError(`${what} must be an array`, line);
  }
  return value.map((v) => asInt(v, `${what} entry`, line));
}

/** Read and validate the manifest sitting next to a dataset. */
export async function loadManifest(path: string): Promise<Manifest> {
  let parsed: unknown;
  try {
    parsed = JSON.parse(await readFile(path, 'utf-8'));
  } catch (err) {
    throw new MalformedRecordError(`manifest is not valid JSON: ${String(err)}`);
  }
  const obj = parsed as Record<string, unknown>;
  if (obj === null || typeof obj !== 'object') {
    throw new MalformedRecordError('manifest must be a JSON object');
  }
  const version = obj['format_version'];
  if (version !== SUPPORTED_FORMAT_VERSION) {
    throw new FormatVersionError(
      `unsupported format_version ${JSON.stringify(version)}; this loader reads "${SUPPORTED_FORMAT_VERSION}"`,
    );
  }
  const cfg = obj['config'] as Record<string, unknown>;
  if (cfg === null || typeof cfg !== 'object') {
    throw new MalformedRecordError('manifest config must be an object');
  }
  const kind = cfg['sample_type'];
  if (!SAMPLE_KINDS.includes(kind as SampleKind)) {
    throw new MalformedRecordError(`unknown sample_type ${JSON.stringify(kind)}`);
  }
  const splits = obj['split_indices'] as Record<string, unknown>;
  const counts = obj['class_counts'] as Record<string, unknown>;
  const weights = obj['class_weights'];
  if (!Array.isArray(weights) || weights.length !== 3) {
    throw new MalformedRecordError('class_weights must hold three numbers');
  }
  return {
    formatVersion: version,
    config: {
      sampleType: kind as SampleKind,
      distance: asInt(cfg['distance'], 'distance'),
      speciesRange: asInt(cfg['species_range'], 'species_range'),
      noise: Boolean(cfg['noise']),
      count: asInt(cfg['count'], 'count'),
      masterSeed: asNumber(cfg['master_seed'], 'master_seed'),
    },
    splitIndices: {
      train: asIntArray(splits?.['train'], 'train split'),
      val: asIntArray(splits?.['val'], 'val split'),
      test: asIntArray(splits?.['test'], 'test split'),
    },
    classCounts: {
      NA: asInt(counts?.['NA'], 'NA count'),
      R: asInt(counts?.['R'], 'R count'),
      S: asInt(counts?.['S'], 'S count'),
    },
    classWeights: [
      asNumber(weights[0], 'class weight'),
      asNumber(weights[1], 'class weight'),
      asNumber(weights[2], 'class weight'),
    ],
    weightConstant: asNumber(obj['weight_constant'], 'weight_constant'),
  };
}

function parseSample(raw: unknown, line: number): LoadedSample {
  if (raw === null || typeof raw !== 'object' || Array.isArray(raw)) {
    throw new MalformedRecordError('record must be a JSON object', line);
  }
  const obj = raw as Record<string, unknown>;
  const kind = obj['sample_type'];
  if (!SAMPLE_KINDS.includes(kind as SampleKind)) {
    throw new MalformedRecordError(`unknown sample_type ${JSON.stringify(kind)}`, line);
  }

  const species = asIntArray(obj['species'], 'species', line);
  species.forEach((s) => {
    if (s < 1) throw new MalformedRecordError(`species must be positive, got ${s}`, line);
  });

  const rawPositions = obj['positions'];
  if (!Array.isArray(rawPositions)) {
    throw new MalformedRecordError('positions must be an array', line);
  }
  const positions = rawPositions.map((p): [number, number, number] => {
    if (!Array.isArray(p) || p.length !== 3) {
      throw new MalformedRecordError('position must be a 3-vector', line);
    }
    return [
      asNumber(p[0], 'coordinate', line),
      asNumber(p[1], 'coordinate', line),
      asNumber(p[2], 'coordinate', line),
    ];
  });

  const rawEdges = obj['edges'];
  if (!Array.isArray(rawEdges)) {
    throw new MalformedRecordError('edges must be an array', line);
  }
  const edges = rawEdges.map((e): [number, number] => {
    if (!Array.isArray(e) || e.length !== 2) {
      throw new MalformedRecordError('edge must be an index pair', line);
    }
    return [asInt(e[0], 'edge endpoint', line), asInt(e[1], 'edge endpoint', line)];
  });

  const rawLabels = obj['labels'];
  if (!Array.isArray(rawLabels)) {
    throw new MalformedRecordError('labels must be an array', line);
  }
  const labels = rawLabels.map((tag): ChiralityTag => {
    if (!TAGS.includes(tag as ChiralityTag)) {
      throw new MalformedRecordError(
        `label must be one of ${TAGS.join('/')}, got ${JSON.stringify(tag)}`,
        line,
      );
    }
    return tag as ChiralityTag;
  });

  const chiralCenter = asInt(obj['chiral_center'], 'chiral_center', line);
  const n = species.length;
  if (positions.length !== n || labels.length !== n) {
    throw new MalformedRecordError(
      `species/positions/labels lengths disagree (${n}/${positions.length}/${labels.length})`,
      line,
    );
  }
  if (chiralCenter < 0 || chiralCenter >= n) {
    throw new MalformedRecordError(`chiral_center ${chiralCenter} out of range`, line);
  }
  edges.forEach(([u, v]) => {
    if (u < 0 || u >= n || v < 0 || v >= n) {
      throw new MalformedRecordError(`edge (${u}, ${v}) references a missing node`, line);
    }
  });

  return {
    sampleType: kind as SampleKind,
    distance: asInt(obj['distance'], 'distance', line),
    sampleSeed: asNumber(obj['sample_seed'], 'sample_seed', line),
    species,
    positions,
    edges,
    chiralCenter,
    labels,
    stpValue: asNumber(obj['stp_value'], 'stp_value', line),
    labelIds: labels.map((tag) => LABEL_IDS[tag]),
    centerMask: labels.map((_, i) => i === chiralCenter),
  };
}

/** Stream samples one line at a time; blank trailing lines are rejected. */
export async function* loadSamples(path: string): AsyncGenerator<LoadedSample> {
  const rl = createInterface({
    input: createReadStream(path, { encoding: 'utf-8' }),
    crlfDelay: Infinity,
  });
  let lineNumber = 0;
  for await (const line of rl) {
    lineNumber += 1;
    const trimmed = line.trim();
    if (!trimmed) {
      throw new MalformedRecordError('blank line in sample file', lineNumber);
    }
    let parsed: unknown;
    try {
      parsed = JSON.parse(trimmed);
    } catch {
      throw new MalformedRecordError('invalid JSON', lineNumber);
    }
    yield parseSample(parsed, lineNumber);
  }
}

export interface Dataset {
  manifest: Manifest;
  samples: AsyncGenerator<LoadedSample>;
}

/** Manifest path convention: `<name>.jsonl` -> `<name>.manifest.json`. */
export function manifestPathFor(datasetPath: string): string {
  const base = datasetPath.endsWith('.jsonl')
    ? datasetPath.slice(0, -'.jsonl'.length)
    : datasetPath;
  return `${base}.manifest.json`;
}

/**
 * Open a dataset: validates the manifest version up front, then streams
 * samples lazily. Iterate `samples` to completion to check the line count.
 */
export async function load(datasetPath: string): Promise<Dataset> {
  const manifest = await loadManifest(manifestPathFor(datasetPath));
  async function* capped(): AsyncGenerator<LoadedSample> {
    let produced = 0;
    for await (const sample of loadSamples(datasetPath)) {
      produced += 1;
      if (produced > manifest.config.count) {
        throw new MalformedRecordError(
          `more records than the manifest count ${manifest.config.count}`,
          produced,
        );
      }
      yield sample;
    }
    if (produced !== manifest.config.count) {
      throw new MalformedRecordError(
        `expected ${manifest.config.count} records, found ${produced}`,
      );
    }
  }
  return { manifest, samples: capped() };
}

/** Aggregate label/node/edge counts; comparable with the generator's stats. */
export async function summarize(datasetPath: string): Promise<DatasetSummary> {
  const { samples } = await load(datasetPath);
  const summary: DatasetSummary = {
    count: 0,
    node_total: 0,
    edge_total_directed: 0,
    n_na: 0,
    n_r: 0,
    n_s: 0,
  };
  for await (const sample of samples) {
    summary.count += 1;
    summary.node_total += sample.species.length;
    summary.edge_total_directed += sample.edges.length;
    for (const tag of sample.labels) {
      if (tag === 'NA') summary.n_na += 1;
      else if (tag === 'R') summary.n_r += 1;
      else summary.n_s += 1;
    }
  }
  return summary;
}

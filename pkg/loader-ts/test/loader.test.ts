import { execFileSync } from 'node:child_process';
import { mkdtempSync, readFileSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import {
  FormatVersionError,
  MalformedRecordError,
  load,
  loadManifest,
  manifestPathFor,
  summarize,
} from '../src/index.js';

const PYTHON = process.env.CHIGRAPH_PYTHON ?? 'python3';

let dir: string;
let smallPath: string;

function generate(path: string, count: number, distance = 1): void {
  execFileSync(PYTHON, [
    '-m',
    'chigraph',
    'generate',
    '--type',
    'simple',
    '--distance',
    String(distance),
    '--species-range',
    '15',
    '--noise',
    'true',
    '--count',
    String(count),
    '--seed',
    '42',
    '--out',
    path,
  ]);
}

function primaryStats(path: string): Record<string, unknown> {
  const out = execFileSync(PYTHON, ['-m', 'chigraph', 'stats', '--in', path], {
    encoding: 'utf-8',
  });
  return JSON.parse(out);
}

beforeAll(() => {
  dir = mkdtempSync(join(tmpdir(), 'chigraph-loader-'));
  smallPath = join(dir, 'small.jsonl');
  generate(smallPath, 25);
});

afterAll(() => {
  // temp dir cleanup is left to the OS; tests may want to inspect artifacts
});

describe('manifest', () => {
  it('exposes config, splits, counts, and weights', async () => {
    const manifest = await loadManifest(manifestPathFor(smallPath));
    expect(manifest.formatVersion).toBe('1');
    expect(manifest.config.count).toBe(25);
    expect(manifest.config.sampleType).toBe('simple');
    expect(
      manifest.splitIndices.train.length +
        manifest.splitIndices.val.length +
        manifest.splitIndices.test.length,
    ).toBe(25);
    expect(manifest.classWeights).toHaveLength(3);
  });

  it('rejects a bumped format version', async () => {
    const manifestPath = manifestPathFor(smallPath);
    const bumpedPath = join(dir, 'bumped.manifest.json');
    const text = readFileSync(manifestPath, 'utf-8');
    writeFileSync(bumpedPath, text.replace('"format_version": "1"', '"format_version": "2"'));
    await expect(loadManifest(bumpedPath)).rejects.toBeInstanceOf(FormatVersionError);
  });
});

describe('sample records', () => {
  it('mirrors every source field and derives ids and mask', async () => {
    const firstLine = readFileSync(smallPath, 'utf-8').split('\n')[0]!;
    const raw = JSON.parse(firstLine);
    const { samples } = await load(smallPath);
    const first = (await samples.next()).value!;

    expect(first.sampleType).toBe(raw.sample_type);
    expect(first.distance).toBe(raw.distance);
    expect(first.sampleSeed).toBe(raw.sample_seed);
    expect(first.species).toEqual(raw.species);
    expect(first.positions).toEqual(raw.positions);
    expect(first.edges).toEqual(raw.edges);
    expect(first.chiralCenter).toBe(raw.chiral_center);
    expect(first.labels).toEqual(raw.labels);
    expect(first.stpValue).toBe(raw.stp_value);

    expect(first.labelIds).toEqual(
      raw.labels.map((t: string) => ({ NA: 0, R: 1, S: 2 })[t]),
    );
    expect(first.centerMask.filter(Boolean)).toHaveLength(1);
    expect(first.centerMask[raw.chiral_center]).toBe(true);
  });

  it('streams exactly the manifest count', async () => {
    const { samples } = await load(smallPath);
    let n = 0;
    for await (const _ of samples) n += 1;
    expect(n).toBe(25);
  });

  it('reports malformed JSON with its line number', async () => {
    const brokenPath = join(dir, 'broken.jsonl');
    const lines = readFileSync(smallPath, 'utf-8').trimEnd().split('\n');
    lines[2] = lines[2]!.slice(0, 30);
    writeFileSync(brokenPath, lines.join('\n') + '\n');
    writeFileSync(
      manifestPathFor(brokenPath),
      readFileSync(manifestPathFor(smallPath), 'utf-8'),
    );
    const { samples } = await load(brokenPath);
    await expect(async () => {
      for await (const _ of samples) {
        /* drain */
      }
    }).rejects.toThrowError(/line 3/);
  });

  it('rejects an unknown label value', async () => {
    const badPath = join(dir, 'badlabel.jsonl');
    const lines = readFileSync(smallPath, 'utf-8').trimEnd().split('\n');
    lines[0] = lines[0]!.replace('"R"', '"Q"').replace('"S"', '"Q"');
    writeFileSync(badPath, lines.join('\n') + '\n');
    writeFileSync(
      manifestPathFor(badPath),
      readFileSync(manifestPathFor(smallPath), 'utf-8'),
    );
    const { samples } = await load(badPath);
    await expect(async () => {
      for await (const _ of samples) {
        /* drain */
      }
    }).rejects.toBeInstanceOf(MalformedRecordError);
  });

  it('detects a record-count mismatch', async () => {
    const shortPath = join(dir, 'short.jsonl');
    const lines = readFileSync(smallPath, 'utf-8').trimEnd().split('\n');
    writeFileSync(shortPath, lines.slice(0, -1).join('\n') + '\n');
    writeFileSync(
      manifestPathFor(shortPath),
      readFileSync(manifestPathFor(smallPath), 'utf-8'),
    );
    const { samples } = await load(shortPath);
    await expect(async () => {
      for await (const _ of samples) {
        /* drain */
      }
    }).rejects.toThrowError(/expected 25 records/);
  });

  it('yields nothing for an empty file with a count-0 manifest', async () => {
    const emptyPath = join(dir, 'empty.jsonl');
    writeFileSync(emptyPath, '');
    const manifest = JSON.parse(readFileSync(manifestPathFor(smallPath), 'utf-8'));
    manifest.config.count = 0;
    manifest.split_indices = { train: [], val: [], test: [] };
    manifest.class_counts = { NA: 0, R: 0, S: 0 };
    writeFileSync(manifestPathFor(emptyPath), JSON.stringify(manifest));
    const { samples } = await load(emptyPath);
    const collected = [];
    for await (const sample of samples) collected.push(sample);
    expect(collected).toHaveLength(0);
  });
});

describe('summaries', () => {
  it('class counts equal the manifest counts exactly', async () => {
    const manifest = await loadManifest(manifestPathFor(smallPath));
    const summary = await summarize(smallPath);
    expect(summary.n_na).toBe(manifest.classCounts.NA);
    expect(summary.n_r).toBe(manifest.classCounts.R);
    expect(summary.n_s).toBe(manifest.classCounts.S);
  });

  it('matches the generator CLI stats on a 1000-sample dataset', async () => {
    const bigPath = join(dir, 'big.jsonl');
    generate(bigPath, 1000, 2);
    const stats = primaryStats(bigPath);
    const summary = await summarize(bigPath);
    expect(summary.count).toBe(stats.count);
    expect(summary.node_total).toBe(stats.node_total);
    expect(summary.edge_total_directed).toBe(stats.edge_total_directed);
    // the full label multiset: per-class counts agree exactly
    expect(summary.n_na).toBe(stats.n_na);
    expect(summary.n_r).toBe(stats.n_r);
    expect(summary.n_s).toBe(stats.n_s);
  }, 30_000);
});

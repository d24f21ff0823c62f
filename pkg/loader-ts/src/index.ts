export {
  SUPPORTED_FORMAT_VERSION,
  load,
  loadManifest,
  loadSamples,
  manifestPathFor,
  summarize,
} from './loader.js';
export type { Dataset } from './loader.js';
export {
  FormatVersionError,
  LABEL_IDS,
  MalformedRecordError,
} from './types.js';
export type {
  ChiralityTag,
  DatasetConfig,
  DatasetSummary,
  LoadedSample,
  Manifest,
  SampleKind,
} from './types.js';

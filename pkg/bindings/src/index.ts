/**
 * Scripting bindings for the bibnov indicator engine.
 *
 * The engine is consumed strictly through its command-line interface and
 * line-delimited score files, so every table returned here is identical to
 * what a direct CLI run produces. Nothing is written outside the requested
 * output directory; without one, score files land in a disposable temp dir
 * that is removed after parsing.
 */

import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";

import { BibnovError, runCli } from "./run";
import { ScoreTable, tableFromJsonl, tableFromScoreFile } from "./table";

export { BibnovError } from "./run";
export type { ScoreRecordRow, ScoreTable } from "./table";

export type Indicator = "uzzi" | "lee" | "foster" | "wang" | "shibayama" | "disruption";

export interface ComputeParams {
  /** Focal publication year; required for the co-occurrence indicators. */
  year?: number;
  /** Entity kind for co-occurrence indicators: "journals" (default) or "keywords". */
  on?: "journals" | "keywords";
  /** Restrict corpus ingest to [lo, hi] publication years. */
  years?: [number, number];
  samples?: number;
  seed?: number;
  threads?: number;
  resolution?: number;
  backward?: number;
  forward?: number;
  reuse?: number;
  /** Embedding file path (shibayama only). */
  embeddings?: string;
  field?: "title" | "abstract";
  q?: number;
  measures?: string[];
  /** Keep per-document raw distributions in the score records. */
  distributions?: boolean;
  /** Persist score files here instead of a disposable temp directory. */
  outDir?: string;
  /** Allow the engine's columnar cache beside the corpus file (off by default:
   * bindings write nothing unless asked). */
  cache?: boolean;
}

const COMMON_KEYS = new Set(["year", "on", "years", "distributions", "outDir", "cache"]);

const INDICATOR_KEYS: Record<Indicator, { required: string[]; optional: string[] }> = {
  lee: { required: ["year"], optional: [] },
  uzzi: { required: ["year"], optional: ["samples", "seed", "threads"] },
  foster: { required: ["year"], optional: ["resolution", "seed"] },
  wang: { required: ["year"], optional: ["backward", "forward", "reuse"] },
  shibayama: { required: ["embeddings"], optional: ["field", "q"] },
  disruption: { required: [], optional: ["measures", "threads"] },
};

function validate(indicator: string, params: ComputeParams): Indicator {
  if (!(indicator in INDICATOR_KEYS)) {
    throw new BibnovError(
      `unknown indicator: ${indicator} (expected one of ${Object.keys(INDICATOR_KEYS).join(", ")})`
    );
  }
  const schema = INDICATOR_KEYS[indicator as Indicator];
  const missing = schema.required.filter(
    (key) => (params as Record<string, unknown>)[key] === undefined
  );
  if (missing.length > 0) {
    throw new BibnovError(`missing required param(s): ${missing.join(", ")}`);
  }
  const allowed = new Set([...schema.required, ...schema.optional, ...COMMON_KEYS]);
  if (indicator === "shibayama" || indicator === "disruption") {
    allowed.delete("on");
  }
  const unknown = Object.keys(params).filter((key) => !allowed.has(key));
  if (unknown.length > 0) {
    throw new BibnovError(`unsupported param(s) for ${indicator}: ${unknown.join(", ")}`);
  }
  if (params.on !== undefined && params.on !== "journals" && params.on !== "keywords") {
    throw new BibnovError(`on must be "journals" or "keywords", got ${String(params.on)}`);
  }
  if (params.field !== undefined && params.field !== "title" && params.field !== "abstract") {
    throw new BibnovError(`field must be "title" or "abstract", got ${String(params.field)}`);
  }
  return indicator as Indicator;
}

function cliArgs(indicator: Indicator, corpusPath: string, params: ComputeParams, outDir: string): string[] {
  const args: string[] =
    indicator === "disruption" ? ["disruption"] : ["novelty", indicator];
  args.push("--corpus", resolve(corpusPath), "--out-dir", outDir);
  if (!params.cache) {
    args.push("--no-cache");
  }
  if (params.years) {
    args.push("--years", `${params.years[0]}:${params.years[1]}`);
  }
  if (params.year !== undefined) {
    args.push("--year", String(params.year));
  }
  if (params.on && indicator !== "shibayama" && indicator !== "disruption") {
    args.push("--on", params.on);
  }
  if (params.distributions === false) {
    args.push("--no-distributions");
  }
  const flags: Array<[string, unknown]> = [
    ["--samples", params.samples],
    ["--seed", params.seed],
    ["--threads", params.threads],
    ["--resolution", params.resolution],
    ["--b", params.backward],
    ["--f", params.forward],
    ["--reuse", params.reuse],
    ["--q", params.q],
    ["--field", params.field],
  ];
  for (const [flag, value] of flags) {
    if (value !== undefined) {
      args.push(flag, String(value));
    }
  }
  if (params.embeddings !== undefined) {
    args.push("--embeddings", resolve(params.embeddings));
  }
  if (params.measures !== undefined) {
    args.push("--measures", params.measures.join(","));
  }
  return args;
}

function scoreFileName(indicator: Indicator, params: ComputeParams): string {
  const entity =
    indicator === "shibayama" ? params.field ?? "title"
    : indicator === "disruption" ? "citations"
    : params.on ?? "journals";
  const year = params.year ?? "all";
  return `${indicator}_${entity}_${year}.jsonl`;
}

/**
 * Run one indicator over a corpus file and return the score table.
 * Values are identical to a CLI run with the same parameters and seed.
 */
export async function compute(
  indicator: string,
  corpusPath: string,
  params: ComputeParams = {}
): Promise<ScoreTable> {
  const kind = validate(indicator, params);
  const keep = params.outDir !== undefined;
  const outDir = params.outDir ? resolve(params.outDir) : mkdtempSync(join(tmpdir(), "bibnov-"));
  try {
    const result = await runCli(cliArgs(kind, corpusPath, params, outDir));
    const table = tableFromScoreFile(join(outDir, scoreFileName(kind, params)), result.exitCode === 2);
    return table;
  } finally {
    if (!keep) {
      rmSync(outDir, { recursive: true, force: true });
    }
  }
}

export interface CorpusSummaryRow {
  id: string;
  year: number;
  n_references: number;
  n_keywords: number;
}

/** Ingest a corpus and return its per-document summary table. */
export async function loadCorpus(
  corpusPath: string,
  years?: [number, number]
): Promise<ScoreTable> {
  const outDir = mkdtempSync(join(tmpdir(), "bibnov-"));
  try {
    const args = ["ingest", "--corpus", resolve(corpusPath), "--no-cache",
                  "--table-out", join(outDir, "docs.jsonl")];
    if (years) {
      args.push("--years", `${years[0]}:${years[1]}`);
    }
    const result = await runCli(args);
    return tableFromJsonl(join(outDir, "docs.jsonl"), result.exitCode === 2);
  } finally {
    rmSync(outDir, { recursive: true, force: true });
  }
}

export interface SynthParams {
  nDocs: number;
  out: string;
  nEntities?: number;
  years?: [number, number];
  seed?: number;
  clusters?: number;
  refs?: [number, number];
  keywords?: [number, number];
  pInCluster?: number;
  pInCorpus?: number;
  embedDim?: number;
}

export interface SynthSummary {
  corpus: string;
  embeddings: string | null;
  truth: string;
  n_docs: number;
  years: [number, number];
  citation_edges: number;
}

/** Generate a deterministic synthetic corpus; returns the engine's summary. */
export async function synthCorpus(params: SynthParams): Promise<SynthSummary> {
  if (params.nDocs === undefined || params.out === undefined) {
    const missing = ["nDocs", "out"].filter(
      (key) => (params as unknown as Record<string, unknown>)[key] === undefined
    );
    throw new BibnovError(`missing required param(s): ${missing.join(", ")}`);
  }
  const args = ["synth", "--n-docs", String(params.nDocs), "--out", resolve(params.out)];
  if (params.nEntities !== undefined) args.push("--n-entities", String(params.nEntities));
  if (params.years) args.push("--years", `${params.years[0]}:${params.years[1]}`);
  if (params.seed !== undefined) args.push("--seed", String(params.seed));
  if (params.clusters !== undefined) args.push("--clusters", String(params.clusters));
  if (params.refs) args.push("--refs", `${params.refs[0]}:${params.refs[1]}`);
  if (params.keywords) args.push("--keywords", `${params.keywords[0]}:${params.keywords[1]}`);
  if (params.pInCluster !== undefined) args.push("--p-in-cluster", String(params.pInCluster));
  if (params.pInCorpus !== undefined) args.push("--p-in-corpus", String(params.pInCorpus));
  if (params.embedDim !== undefined) args.push("--embed-dim", String(params.embedDim));
  const result = await runCli(args);
  return JSON.parse(result.stdout.trim()) as SynthSummary;
}

import assert from "node:assert/strict";
import { readFileSync, mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { before, test } from "node:test";

import { BibnovError, compute, loadCorpus, synthCorpus } from "../src/index";
import { runCli } from "../src/run";

let workDir: string;
let corpusPath: string;
let embeddingsPath: string;

before(async () => {
  workDir = mkdtempSync(join(tmpdir(), "bibnov-fixture-"));
  corpusPath = join(workDir, "corpus.jsonl");
  const summary = await synthCorpus({
    nDocs: 120,
    nEntities: 14,
    years: [2000, 2005],
    seed: 21,
    out: corpusPath,
  });
  assert.equal(summary.n_docs, 120);
  assert.ok(summary.embeddings);
  embeddingsPath = summary.embeddings as string;
});

test("synthCorpus is deterministic", async () => {
  const a = await synthCorpus({ nDocs: 30, seed: 4, out: join(workDir, "a.jsonl") });
  const b = await synthCorpus({ nDocs: 30, seed: 4, out: join(workDir, "b.jsonl") });
  assert.equal(a.citation_edges, b.citation_edges);
  assert.deepEqual(readFileSync(a.corpus, "utf-8"), readFileSync(b.corpus, "utf-8"));
});

test("loadCorpus returns one row per document", async () => {
  const table = await loadCorpus(corpusPath);
  assert.equal(table.rows.length, 120);
  assert.deepEqual(table.columns, ["id", "year", "n_references", "n_keywords"]);
  const filtered = await loadCorpus(corpusPath, [2002, 2002]);
  assert.ok(filtered.rows.length < 120);
  assert.ok(filtered.rows.every((row) => row.year === 2002));
});

test("compute('lee') returns a table equal to the CLI output", async () => {
  const table = await compute("lee", corpusPath, { year: 2003, on: "journals" });
  assert.ok(table.rows.length > 0);
  assert.ok(table.columns.includes("doc_id"));
  assert.ok(table.columns.includes("commonness"));

  const cliDir = mkdtempSync(join(tmpdir(), "bibnov-cli-"));
  await runCli([
    "novelty", "lee", "--corpus", corpusPath, "--on", "journals",
    "--year", "2003", "--out-dir", cliDir,
  ]);
  const cliText = readFileSync(join(cliDir, "lee_journals_2003.jsonl"), "utf-8");
  assert.equal(table.rawLines.join("\n") + "\n", cliText);
});

test("every indicator is bit-identical to direct CLI output", async () => {
  const cases: Array<{ indicator: string; params: Record<string, unknown>; args: string[]; file: string }> = [
    {
      indicator: "lee",
      params: { year: 2003, on: "keywords" },
      args: ["novelty", "lee", "--on", "keywords", "--year", "2003"],
      file: "lee_keywords_2003.jsonl",
    },
    {
      indicator: "uzzi",
      params: { year: 2003, on: "journals", samples: 8, seed: 5 },
      args: ["novelty", "uzzi", "--on", "journals", "--year", "2003", "--samples", "8", "--seed", "5"],
      file: "uzzi_journals_2003.jsonl",
    },
    {
      indicator: "foster",
      params: { year: 2003, on: "journals", resolution: 1.0, seed: 2 },
      args: ["novelty", "foster", "--on", "journals", "--year", "2003", "--resolution", "1.0", "--seed", "2"],
      file: "foster_journals_2003.jsonl",
    },
    {
      indicator: "wang",
      params: { year: 2003, on: "journals", backward: 2, forward: 2, reuse: 1 },
      args: ["novelty", "wang", "--on", "journals", "--year", "2003", "--b", "2", "--f", "2", "--reuse", "1"],
      file: "wang_journals_2003.jsonl",
    },
    {
      indicator: "disruption",
      params: { year: 2003 },
      args: ["disruption", "--year", "2003"],
      file: "disruption_citations_2003.jsonl",
    },
  ];
  for (const c of cases) {
    const table = await compute(c.indicator, corpusPath, c.params);
    const cliDir = mkdtempSync(join(tmpdir(), "bibnov-cli-"));
    const insert = c.args[0] === "disruption" ? 1 : 2;
    const args = [...c.args.slice(0, insert), "--corpus", corpusPath, "--out-dir", cliDir, ...c.args.slice(insert)];
    await runCli(args);
    const cliText = readFileSync(join(cliDir, c.file), "utf-8");
    assert.equal(table.rawLines.join("\n") + "\n", cliText, `${c.indicator} diverged from CLI`);
    assert.ok(table.rows.length > 0, `${c.indicator} produced no rows`);
  }
});

test("shibayama parity including partial-success handling", async () => {
  const params = { embeddings: embeddingsPath, field: "title" as const, q: 10, year: 2003 };
  const table = await compute("shibayama", corpusPath, params);
  const cliDir = mkdtempSync(join(tmpdir(), "bibnov-cli-"));
  await runCli([
    "novelty", "shibayama", "--corpus", corpusPath, "--out-dir", cliDir,
    "--embeddings", embeddingsPath, "--field", "title", "--q", "10", "--year", "2003",
  ]);
  const cliText = readFileSync(join(cliDir, "shibayama_title_2003.jsonl"), "utf-8");
  assert.equal(table.rawLines.join("\n") + "\n", cliText);
});

test("compute is deterministic across calls", async () => {
  const params = { year: 2002, on: "journals" as const, samples: 6, seed: 9 };
  const a = await compute("uzzi", corpusPath, params);
  const b = await compute("uzzi", corpusPath, params);
  assert.deepEqual(a.rawLines, b.rawLines);
});

test("outDir persists the score file", async () => {
  const keep = mkdtempSync(join(tmpdir(), "bibnov-keep-"));
  await compute("lee", corpusPath, { year: 2003, outDir: keep });
  const text = readFileSync(join(keep, "lee_journals_2003.jsonl"), "utf-8");
  assert.ok(text.length > 0);
});

test("unknown indicator is rejected", async () => {
  await assert.rejects(
    compute("sparkle", corpusPath, { year: 2003 }),
    (err: unknown) => err instanceof BibnovError && /unknown indicator/.test(err.message)
  );
});

test("missing required param names the key", async () => {
  await assert.rejects(
    compute("lee", corpusPath, {}),
    (err: unknown) => err instanceof BibnovError && /missing required param\(s\): year/.test(err.message)
  );
  await assert.rejects(
    compute("shibayama", corpusPath, { year: 2003 }),
    (err: unknown) => err instanceof BibnovError && /embeddings/.test(err.message)
  );
});

test("unsupported param is rejected", async () => {
  await assert.rejects(
    compute("lee", corpusPath, { year: 2003, samples: 5 } as never),
    (err: unknown) => err instanceof BibnovError && /unsupported param/.test(err.message)
  );
});

test("engine failures surface stderr", async () => {
  await assert.rejects(
    compute("lee", join(workDir, "missing.jsonl"), { year: 2003 }),
    (err: unknown) => err instanceof BibnovError && (err as BibnovError).exitCode !== 0
  );
});

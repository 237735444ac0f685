import { readFileSync } from "node:fs";

/** One parsed score record, as written by the engine. */
export interface ScoreRecordRow {
  doc_id: string;
  indicator: string;
  entity: string;
  year: number | null;
  fingerprint: string;
  params: Record<string, unknown>;
  scores: Record<string, number | null>;
  percentiles: Record<string, number> | null;
  distribution: number[] | null;
  meta: Record<string, unknown>;
}

/**
 * Tabular view over a score file. `rows` flattens identification fields,
 * score names and meta counters into one record per document; `rawLines`
 * preserves the exact payload bytes for parity checks against direct CLI use.
 */
export interface ScoreTable {
  columns: string[];
  rows: Record<string, unknown>[];
  records: ScoreRecordRow[];
  rawLines: string[];
  /** True when the engine reported partial success (exit code 2). */
  partial: boolean;
}

function flatten(record: ScoreRecordRow): Record<string, unknown> {
  const row: Record<string, unknown> = {
    doc_id: record.doc_id,
    indicator: record.indicator,
    entity: record.entity,
    year: record.year,
    fingerprint: record.fingerprint,
  };
  for (const [name, value] of Object.entries(record.scores)) {
    row[name] = value;
  }
  for (const [name, value] of Object.entries(record.meta)) {
    if (!(name in row)) {
      row[name] = value;
    }
  }
  return row;
}

/** Parse a line-delimited score file into a table. */
export function tableFromScoreFile(path: string, partial = false): ScoreTable {
  const text = readFileSync(path, "utf-8");
  const rawLines = text.split("\n").filter((line) => line.length > 0);
  const records = rawLines.map((line) => JSON.parse(line) as ScoreRecordRow);
  const rows = records.map(flatten);
  const columns: string[] = [];
  for (const row of rows) {
    for (const key of Object.keys(row)) {
      if (!columns.includes(key)) {
        columns.push(key);
      }
    }
  }
  return { columns, rows, records, rawLines, partial };
}

/** Parse a plain jsonl table (e.g. the ingest document summary). */
export function tableFromJsonl(path: string, partial = false): ScoreTable {
  const text = readFileSync(path, "utf-8");
  const rawLines = text.split("\n").filter((line) => line.length > 0);
  const rows = rawLines.map((line) => JSON.parse(line) as Record<string, unknown>);
  const columns: string[] = [];
  for (const row of rows) {
    for (const key of Object.keys(row)) {
      if (!columns.includes(key)) {
        columns.push(key);
      }
    }
  }
  return { columns, rows, records: [], rawLines, partial };
}

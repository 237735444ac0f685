import { spawn } from "node:child_process";

/** Raised for CLI failures and for parameter validation problems. */
export class BibnovError extends Error {
  readonly exitCode: number | null;
  readonly stderr: string;

  constructor(message: string, exitCode: number | null = null, stderr = "") {
    super(message);
    this.name = "BibnovError";
    this.exitCode = exitCode;
    this.stderr = stderr;
  }
}

export interface RunResult {
  stdout: string;
  stderr: string;
  /** 0 = success, 2 = partial success (some documents skipped). */
  exitCode: number;
}

/** Python interpreter hosting the engine; override with BIBNOV_PYTHON. */
export function pythonExecutable(): string {
  return process.env.BIBNOV_PYTHON ?? "python3";
}

/**
 * Invoke the engine CLI (`python -m bibnov ...`) and capture its output.
 * Exit code 2 resolves normally (partial success is still success with a
 * warning); anything else non-zero rejects with stderr attached.
 */
export function runCli(args: string[], cwd?: string): Promise<RunResult> {
  return new Promise((resolve, reject) => {
    const child = spawn(pythonExecutable(), ["-m", "bibnov", ...args], {
      cwd,
      stdio: ["ignore", "pipe", "pipe"],
    });
    let stdout = "";
    let stderr = "";
    child.stdout.on("data", (chunk) => (stdout += chunk));
    child.stderr.on("data", (chunk) => (stderr += chunk));
    child.on("error", (err) => reject(new BibnovError(`failed to launch engine: ${err.message}`)));
    child.on("close", (code) => {
      if (code === 0 || code === 2) {
        resolve({ stdout, stderr, exitCode: code });
      } else {
        reject(new BibnovError(`bibnov ${args[0] ?? ""} failed: ${stderr.trim()}`, code, stderr));
      }
    });
  });
}

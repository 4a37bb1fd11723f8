/**
 * Global setup for the integration tests: seed a fixture store with the
 * Python CLI, start the real service, and hand its URL (plus the seeded
 * graph ids) to the tests.
 */

import { execFileSync, spawn, ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import type { TestProject } from "vitest/node";

const PYTHON = process.env.GRAPHHAUS_PYTHON ?? "python3";

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const probe = createServer();
    probe.listen(0, "127.0.0.1", () => {
      const address = probe.address();
      if (address && typeof address === "object") {
        const port = address.port;
        probe.close(() => resolve(port));
      } else {
        reject(new Error("no port"));
      }
    });
  });
}

async function waitForHealth(baseUrl: string, proc: ChildProcess): Promise<void> {
  const deadline = Date.now() + 30_000;
  let lastError = "";
  while (Date.now() < deadline) {
    if (proc.exitCode !== null) {
      throw new Error(`server exited early (code ${proc.exitCode}): ${lastError}`);
    }
    try {
      const response = await fetch(`${baseUrl}/api/health`);
      if (response.ok) return;
    } catch (error) {
      lastError = (error as Error).message;
    }
    await new Promise((r) => setTimeout(r, 200));
  }
  throw new Error(`server did not come up: ${lastError}`);
}

export default async function setup(project: TestProject): Promise<() => Promise<void>> {
  const workDir = mkdtempSync(join(tmpdir(), "graphhaus-ui-"));
  const storePath = join(workDir, "fixture.db");
  const seedScript = fileURLToPath(new URL("./seed_store.py", import.meta.url));

  const seedOutput = execFileSync(PYTHON, [seedScript, storePath], { encoding: "utf8" });
  const seededIds: Record<string, number> = {};
  for (const line of seedOutput.trim().split("\n")) {
    const [name, id] = line.split("=");
    if (name && id) seededIds[name] = Number(id);
  }

  const port = await freePort();
  const baseUrl = `http://127.0.0.1:${port}`;
  const server = spawn(
    PYTHON,
    ["-m", "graphhaus.cli", "--store", storePath, "serve", "--port", String(port)],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  let stderr = "";
  server.stderr?.on("data", (chunk) => (stderr += String(chunk)));
  try {
    await waitForHealth(baseUrl, server);
  } catch (error) {
    server.kill("SIGTERM");
    throw new Error(`${(error as Error).message}\n${stderr}`);
  }

  project.provide("baseUrl", baseUrl);
  project.provide("seededIds", seededIds);

  return async () => {
    server.kill("SIGTERM");
    await new Promise((resolve) => server.on("exit", resolve));
    rmSync(workDir, { recursive: true, force: true });
  };
}

// Boots the Python test stack (memory services + replay scorer) once for
// the whole run and hands the URLs to tests via provide().

import { spawn, type ChildProcess } from "node:child_process";
import { fileURLToPath } from "node:url";
import path from "node:path";
import readline from "node:readline";
import type { TestProject } from "vitest/node";

let child: ChildProcess | null = null;

export interface StackUrls {
  service: string;
  freshService: string;
  scorer: string;
}

export default async function setup(project: TestProject): Promise<() => void> {
  const here = path.dirname(fileURLToPath(import.meta.url));
  const script = path.join(here, "..", "scripts", "test_stack.py");
  child = spawn("python3", [script], { stdio: ["ignore", "pipe", "inherit"] });

  const urls = await new Promise<StackUrls>((resolve, reject) => {
    const timer = setTimeout(() => reject(new Error("test stack did not start in time")), 30_000);
    const lines = readline.createInterface({ input: child!.stdout! });
    lines.once("line", (line) => {
      clearTimeout(timer);
      try {
        resolve(JSON.parse(line) as StackUrls);
      } catch (err) {
        reject(err);
      }
    });
    child!.once("exit", (code) => {
      clearTimeout(timer);
      reject(new Error(`test stack exited early with code ${code}`));
    });
  });

  project.provide("stackUrls", urls);
  return () => {
    child?.kill("SIGTERM");
  };
}

declare module "vitest" {
  export interface ProvidedContext {
    stackUrls: StackUrls;
  }
}

#!/usr/bin/env node
/**
 * Figure renderer: `render --spec <path>` reads a figure spec (same INI
 * format as the lab's experiment configs), loads the referenced CSVs and
 * writes a deterministic SVG. Exit codes: 0 ok, 2 spec error, 3 data error,
 * 4 i/o error.
 */

import * as fs from "node:fs";
import * as path from "node:path";
import { parseFigureSpec, SpecError } from "./config.js";
import { CsvError, parseCsv } from "./csv.js";
import { buildFigure } from "./figures.js";
import { renderSvg } from "./render.js";

function usage(): never {
  process.stderr.write("usage: ghzlab-figures render --spec <path>\n");
  process.exit(2);
}

export function renderFromSpecFile(specPath: string): string {
  const specText = fs.readFileSync(specPath, "utf8");
  const spec = parseFigureSpec(specText);
  const baseDir = path.dirname(path.resolve(specPath));
  const tables = spec.input.map((name) => {
    const csvPath = path.isAbsolute(name) ? name : path.join(baseDir, name);
    return parseCsv(fs.readFileSync(csvPath, "utf8"));
  });
  const build = buildFigure(spec, tables);
  const svg = renderSvg(build, spec.width, spec.height);
  const outPath = path.isAbsolute(spec.output)
    ? spec.output
    : path.join(baseDir, spec.output);
  fs.mkdirSync(path.dirname(outPath), { recursive: true });
  fs.writeFileSync(outPath, svg);
  return outPath;
}

function main(argv: string[]): number {
  if (argv.length < 1 || argv[0] !== "render") usage();
  const specIndex = argv.indexOf("--spec");
  if (specIndex < 0 || specIndex + 1 >= argv.length) usage();
  try {
    const outPath = renderFromSpecFile(argv[specIndex + 1]);
    process.stdout.write(`wrote ${outPath}\n`);
    return 0;
  } catch (error) {
    if (error instanceof SpecError) {
      process.stderr.write(`spec error: ${error.message}\n`);
      return 2;
    }
    if (error instanceof CsvError) {
      process.stderr.write(`data error: ${error.message}\n`);
      return 3;
    }
    process.stderr.write(`i/o error: ${String(error)}\n`);
    return 4;
  }
}

const entry = process.argv[1] ? path.resolve(process.argv[1]) : "";
if (entry.endsWith("cli.js") || entry.endsWith("cli.ts")) {
  process.exit(main(process.argv.slice(2)));
}

/**
 * Figure-spec parsing: the same flat INI key-value format the primary CLI
 * uses for its experiment configs. Unknown sections or keys are rejected so
 * typos fail loudly.
 */

export interface FigureSpec {
  kind: "purity" | "delta" | "qgrid" | "qfit" | "timeseries";
  input: string[];
  output: string;
  title: string;
  width: number;
  height: number;
}

const FIGURE_KINDS = new Set(["purity", "delta", "qgrid", "qfit", "timeseries"]);

const SCHEMA: Record<string, Set<string>> = {
  figure: new Set(["kind", "input", "output", "title", "width", "height"]),
};

export class SpecError extends Error {}

type Sections = Map<string, Map<string, string>>;

export function parseIni(text: string): Sections {
  const sections: Sections = new Map();
  let current: Map<string, string> | null = null;
  let currentName = "";
  const lines = text.split(/\r?\n/);
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (line === "" || line.startsWith("#") || line.startsWith(";")) continue;
    if (line.startsWith("[") && line.endsWith("]")) {
      currentName = line.slice(1, -1).trim();
      if (sections.has(currentName)) {
        throw new SpecError(`line ${i + 1}: duplicate section [${currentName}]`);
      }
      current = new Map();
      sections.set(currentName, current);
      continue;
    }
    const eq = line.indexOf("=");
    if (eq < 0 || current === null) {
      throw new SpecError(`line ${i + 1}: expected 'key = value' inside a section`);
    }
    const key = line.slice(0, eq).trim();
    const value = line.slice(eq + 1).trim();
    if (current.has(key)) {
      throw new SpecError(`line ${i + 1}: duplicate key '${key}' in [${currentName}]`);
    }
    current.set(key, value);
  }
  return sections;
}

export function parseFigureSpec(text: string): FigureSpec {
  const sections = parseIni(text);
  for (const [name, keys] of sections) {
    const allowed = SCHEMA[name];
    if (!allowed) throw new SpecError(`unknown section [${name}]`);
    for (const key of keys.keys()) {
      if (!allowed.has(key)) throw new SpecError(`unknown key '${key}' in [${name}]`);
    }
  }
  const figure = sections.get("figure");
  if (!figure) throw new SpecError("missing [figure] section");
  const kind = figure.get("kind") ?? "";
  if (!FIGURE_KINDS.has(kind)) {
    throw new SpecError(
      `[figure].kind must be one of ${[...FIGURE_KINDS].join(", ")}; got '${kind}'`,
    );
  }
  const input = (figure.get("input") ?? "")
    .split(",")
    .map((piece) => piece.trim())
    .filter((piece) => piece.length > 0);
  if (input.length === 0) throw new SpecError("[figure].input must list at least one CSV");
  const output = figure.get("output") ?? "";
  if (output === "") throw new SpecError("[figure].output is required");
  const width = Number(figure.get("width") ?? "900");
  const height = Number(figure.get("height") ?? "600");
  if (!Number.isFinite(width) || !Number.isFinite(height) || width <= 0 || height <= 0) {
    throw new SpecError("[figure].width/height must be positive numbers");
  }
  return {
    kind: kind as FigureSpec["kind"],
    input,
    output,
    title: figure.get("title") ?? "",
    width,
    height,
  };
}

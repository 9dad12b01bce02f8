/**
 * Minimal CSV reader for the primary CLI's outputs: header row plus
 * comma-separated unquoted fields (the lab never emits quoted cells).
 */

export class CsvError extends Error {}

export interface Table {
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) throw new CsvError("empty CSV");
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((line, index) => {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new CsvError(
        `row ${index + 2}: expected ${header.length} cells, got ${cells.length}`,
      );
    }
    return cells;
  });
  return { header, rows };
}

/** Column accessor that names the missing column in its diagnostic. */
export function column(table: Table, name: string): string[] {
  const index = table.header.indexOf(name);
  if (index < 0) {
    throw new CsvError(
      `missing column '${name}' (have: ${table.header.join(", ")})`,
    );
  }
  return table.rows.map((row) => row[index]);
}

export function numericColumn(table: Table, name: string): number[] {
  return column(table, name).map((cell, index) => {
    const value = Number(cell);
    if (!Number.isFinite(value)) {
      throw new CsvError(`column '${name}' row ${index + 2}: not a number: '${cell}'`);
    }
    return value;
  });
}

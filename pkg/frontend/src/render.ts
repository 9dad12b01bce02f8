/** Server-side SVG rendering through echarts' SSR mode (no canvas needed). */

import { createRequire } from "node:module";
import { FigureBuild } from "./figures.js";

// echarts declares its types with `export =`, which node16 ESM resolution
// refuses to type as a value import; load the CJS build explicitly and type
// the thin slice of API used here.
interface SsrChart {
  setOption(option: Record<string, unknown>): void;
  renderToSVGString(): string;
  dispose(): void;
}

interface EChartsModule {
  init(
    dom: null,
    theme: null,
    opts: { renderer: "svg"; ssr: boolean; width: number; height: number },
  ): SsrChart;
}

const require = createRequire(import.meta.url);
const echarts = require("echarts") as EChartsModule;

export function renderSvg(build: FigureBuild, width: number, height: number): string {
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width,
    height,
  });
  try {
    chart.setOption(build.option);
    return chart.renderToSVGString();
  } finally {
    chart.dispose();
  }
}

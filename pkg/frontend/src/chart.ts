import { CATEGORIES, type StatsRow } from "./types.js";
import type { ApiClient } from "./api.js";

export interface BarDatum {
  category: string;
  description: string;
  recordings: number;
  definedItems: number;
}

/** Map the stats payload onto the eight chart bars, one per category. */
export function chartData(rows: StatsRow[]): BarDatum[] {
  if (rows.length !== CATEGORIES.length) {
    throw new Error(`expected ${CATEGORIES.length} categories, got ${rows.length}`);
  }
  const byCategory = new Map(rows.map((row) => [row.category, row]));
  return CATEGORIES.map((category) => {
    const row = byCategory.get(category);
    if (!row) throw new Error(`missing category ${category} in stats payload`);
    return {
      category,
      description: row.description,
      recordings: row.recording_count,
      definedItems: row.defined_item_count,
    };
  });
}

/**
 * Chart state for the capture-home screen: refreshed after every saved
 * session; a failed refresh keeps the previous bars but marks them stale.
 */
export class StatsModel {
  bars: BarDatum[] | null = null;
  error: string | null = null;
  stale = false;

  async refresh(api: Pick<ApiClient, "stats">): Promise<void> {
    try {
      this.bars = chartData(await api.stats());
      this.error = null;
      this.stale = false;
    } catch (err) {
      this.error = err instanceof Error ? err.message : String(err);
      this.stale = this.bars !== null;
    }
  }

  barValue(category: string): number | null {
    const bar = this.bars?.find((b) => b.category === category);
    return bar ? bar.recordings : null;
  }
}

/** Render the two-series bar chart (recordings primary, defined items secondary). */
export function drawChart(canvas: HTMLCanvasElement, bars: BarDatum[]): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);

  const margin = { left: 36, right: 8, top: 14, bottom: 26 };
  const plotW = width - margin.left - margin.right;
  const plotH = height - margin.top - margin.bottom;
  const peak = Math.max(1, ...bars.map((b) => Math.max(b.recordings, b.definedItems)));
  const slot = plotW / bars.length;

  ctx.font = "11px sans-serif";
  ctx.strokeStyle = "#888";
  ctx.beginPath();
  ctx.moveTo(margin.left, margin.top);
  ctx.lineTo(margin.left, margin.top + plotH);
  ctx.lineTo(margin.left + plotW, margin.top + plotH);
  ctx.stroke();

  bars.forEach((bar, i) => {
    const x0 = margin.left + i * slot;
    const recH = (bar.recordings / peak) * plotH;
    const defH = (bar.definedItems / peak) * plotH;

    ctx.fillStyle = "#b9cdea";
    ctx.fillRect(x0 + slot * 0.52, margin.top + plotH - defH, slot * 0.3, defH);
    ctx.fillStyle = "#2a6fb8";
    ctx.fillRect(x0 + slot * 0.14, margin.top + plotH - recH, slot * 0.34, recH);

    ctx.fillStyle = "#333";
    ctx.textAlign = "center";
    ctx.fillText(bar.category, x0 + slot / 2, height - 10);
    if (bar.recordings > 0) {
      ctx.fillText(String(bar.recordings), x0 + slot * 0.31, margin.top + plotH - recH - 3);
    }
  });

  ctx.textAlign = "right";
  ctx.fillStyle = "#666";
  ctx.fillText(String(peak), margin.left - 4, margin.top + 8);
  ctx.fillText("0", margin.left - 4, margin.top + plotH);
}

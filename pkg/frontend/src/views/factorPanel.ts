/** Factor panel: the report exactly as served — same order, same numbers.
 * Most-influential rows are emphasized; red-flag rows carry a
 * potential-emergence warning. */

import type { FactorReport } from "../types.js";

export function renderFactorPanel(report: FactorReport): string {
  const lines: string[] = [
    `Factors (threshold ${report.threshold}, ` +
      `${report.total_factors} distinct, ${report.total_mentions} mentions, ` +
      `session v${report.session_version})`,
  ];
  if (report.entries.length === 0) {
    lines.push("No factors mentioned yet.");
    return lines.join("\n");
  }
  for (const entry of report.entries) {
    let row = `${entry.token}  ${entry.frequency}  steps ${entry.steps.join(",")}`;
    if (entry.classification === "most_influential") {
      row = `* ${row}  most_influential`;
    } else if (entry.classification === "red_flag") {
      row = `  ${row}  red_flag (potential emergence: rarely mentioned)`;
    } else {
      row = `  ${row}`;
    }
    lines.push(row);
  }
  return lines.join("\n");
}

/** Stale-data banner shown when a refresh fails; keeps the last good view. */
export function renderStaleDataBanner(lastGoodVersion: number): string {
  return `Could not refresh factors; showing data from session v${lastGoodVersion}.`;
}

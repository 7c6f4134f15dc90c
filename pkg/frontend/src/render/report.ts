import type { AnalysisReport, FilterSpec } from "../api/types";
import { renderHistogram } from "./histogram";

// Every number shown here is copied verbatim from the report JSON -- the
// UI computes nothing. Undefined statistics (null in the JSON) render as
// "not defined", and the support verdict always carries its ratio and the
// thresholds that produced it, never a bare label.

const SUPPORTED_VERSION = 1;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function describeFilter(spec: FilterSpec): string {
  return spec.clauses
    .map((clause) => {
      if (clause.type === "set") {
        return `${clause.feature} IN {${clause.values.join(", ")}}`;
      }
      const parts: string[] = [];
      if (clause.min != null) {
        parts.push(`${clause.feature} ${clause.minInclusive === false ? ">" : ">="} ${clause.min}`);
      }
      if (clause.max != null) {
        parts.push(`${clause.feature} ${clause.maxInclusive === false ? "<" : "<="} ${clause.max}`);
      }
      return parts.join(" AND ");
    })
    .join(" AND ");
}

function num(value: number | null, defined = true): string {
  return value == null || !defined ? "not defined" : String(value);
}

function tableOf(className: string, headers: string[], rows: string[][]): HTMLTableElement {
  const table = el("table", className);
  const headRow = el("tr");
  for (const text of headers) headRow.appendChild(el("th", undefined, text));
  const thead = el("thead");
  thead.appendChild(headRow);
  table.appendChild(thead);
  const tbody = el("tbody");
  for (const cells of rows) {
    const row = el("tr");
    row.appendChild(el("th", undefined, cells[0]));
    for (const cell of cells.slice(1)) row.appendChild(el("td", undefined, cell));
    tbody.appendChild(row);
  }
  table.appendChild(tbody);
  return table;
}

function comparisonTable(report: AnalysisReport): HTMLTableElement {
  return tableOf("comparison-table",
    ["", "naive (vs excluded)", "counterfactual (vs matched)"],
    [
      ["mean difference",
       num(report.naive.meanDifference), num(report.counterfactual.meanDifference)],
      ["Cohen's d",
       num(report.naive.cohensD, report.naive.cohensDDefined),
       num(report.counterfactual.cohensD, report.counterfactual.cohensDDefined)],
      ["KS statistic", num(report.naive.ksStatistic), num(report.counterfactual.ksStatistic)],
      ["comparison group size",
       String(report.naive.groupBSize), String(report.counterfactual.groupBSize)],
    ]);
}

function balanceTable(report: AnalysisReport): HTMLTableElement {
  return tableOf("balance-table",
    ["covariate", "SMD naive", "SMD counterfactual"],
    report.balance.perCovariate.map((entry) => [
      entry.feature, num(entry.smdNaive), num(entry.smdCounterfactual),
    ]));
}

function supportBadge(report: AnalysisReport): HTMLElement {
  const badge = el("div", `support-badge support-${report.support.class}`);
  badge.appendChild(el("strong", undefined, report.support.class));
  badge.appendChild(
    el("span", "support-ratio",
       ` ratio ${num(report.support.ratio)} of the naive gap survives matching`),
  );
  const { weakenedBelow, preservedAtLeast } = report.support.thresholds;
  badge.appendChild(
    el("span", "support-thresholds",
       ` (weakened < ${weakenedBelow}, preserved ≥ ${preservedAtLeast})`),
  );
  if (report.support.naiveGapNegligible) {
    badge.appendChild(
      el("span", "support-note", " — the naive gap itself is negligible"),
    );
  }
  return badge;
}

export function renderErrorBanner(root: HTMLElement, message: string): void {
  root.replaceChildren(el("div", "error-banner", message));
}

export function renderReport(root: HTMLElement, report: AnalysisReport): void {
  if (report.reportVersion !== SUPPORTED_VERSION) {
    renderErrorBanner(
      root,
      `report version ${report.reportVersion} is not supported (expected ${SUPPORTED_VERSION})`,
    );
    return;
  }

  const view = el("div", "report");

  const header = el("div", "report-header");
  header.appendChild(el("h2", undefined, `outcome: ${report.outcome}`));
  header.appendChild(el("p", "filter-echo", `filter: ${describeFilter(report.filter)}`));
  const { includedCount, excludedCount, counterfactualCount } = report.partition;
  header.appendChild(
    el("p", "partition-echo",
       `included ${includedCount} · excluded ${excludedCount} · counterfactual ${counterfactualCount}`),
  );
  view.appendChild(header);

  view.appendChild(supportBadge(report));
  view.appendChild(renderHistogram(report));
  view.appendChild(comparisonTable(report));

  const balanceSection = el("div", "balance-section");
  balanceSection.appendChild(el("h3", undefined, "covariate balance"));
  balanceSection.appendChild(balanceTable(report));
  view.appendChild(balanceSection);

  root.replaceChildren(view);
}

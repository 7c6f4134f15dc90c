import { ApiClient, ApiError } from "./api/client";
import { createMockFetch } from "./api/mock";
import type { FeatureInfo } from "./api/types";
import { FilterBuilder } from "./filter/builder";
import { renderErrorBanner, renderReport } from "./render/report";
import { ExplorerState } from "./state";
import "./style.css";

// ?mock=1 runs the whole explorer against the recorded fixtures -- no
// server needed. Otherwise requests go to the page origin (the vite dev
// server proxies them to a locally running `cofact serve`).

const mockMode = new URLSearchParams(location.search).has("mock");
const client = new ApiClient(mockMode ? { fetchFn: createMockFetch() } : {});
const state = new ExplorerState(client);

const app = document.getElementById("app")!;
const controlsPane = document.createElement("div");
controlsPane.className = "controls-pane";
const reportPane = document.createElement("div");
reportPane.className = "report-pane";
app.append(controlsPane, reportPane);

let builder: FilterBuilder | null = null;

function option(value: string, label = value): HTMLOptionElement {
  const node = document.createElement("option");
  node.value = value;
  node.textContent = label;
  return node;
}

function describeError(error: unknown): string {
  if (error instanceof ApiError) {
    const where = error.position !== undefined ? ` (position ${error.position})` : "";
    return `${error.code}: ${error.message}${where}`;
  }
  return String(error);
}

function renderBuilderControls(summaryBar: HTMLElement, clauseList: HTMLElement): void {
  if (!builder) return;
  summaryBar.textContent = builder.summary();
  clauseList.replaceChildren();
  builder.controls.forEach((control, index) => {
    const row = document.createElement("div");
    row.className = "clause-row";
    row.appendChild(Object.assign(document.createElement("strong"), { textContent: control.feature }));

    if (control.kind === "range") {
      const feature = builder!.catalog.find((f) => f.name === control.feature);
      for (const side of ["lower", "upper"] as const) {
        const input = document.createElement("input");
        input.type = "number";
        input.step = "any";
        input.placeholder = side === "lower" ? "min" : "max";
        if (feature?.kind === "numeric") {
          input.min = String(feature.min);
          input.max = String(feature.max);
        }
        const bound = side === "lower" ? control.lower : control.upper;
        if (bound != null) input.value = String(bound);
        input.addEventListener("change", () => {
          const value = input.value === "" ? null : Number(input.value);
          builder!.setBound(index, side, value);
          renderBuilderControls(summaryBar, clauseList);
        });
        row.appendChild(input);
      }
    } else {
      const feature = builder!.catalog.find((f) => f.name === control.feature);
      if (feature?.kind === "categorical") {
        for (const category of Object.keys(feature.categories)) {
          const label = document.createElement("label");
          const box = document.createElement("input");
          box.type = "checkbox";
          box.checked = control.selected.includes(category);
          box.addEventListener("change", () => {
            builder!.toggleValue(index, category);
            renderBuilderControls(summaryBar, clauseList);
          });
          label.append(box, category);
          row.appendChild(label);
        }
      }
    }

    const remove = document.createElement("button");
    remove.textContent = "remove";
    remove.addEventListener("click", () => {
      builder!.removeClause(index);
      renderBuilderControls(summaryBar, clauseList);
    });
    row.appendChild(remove);
    clauseList.appendChild(row);
  });
}

async function openFixture(name: string): Promise<void> {
  await state.openFixtureSession(name);
  builder = new FilterBuilder(state.features);
  reportPane.replaceChildren();
  controlsPane.replaceChildren();

  const summaryBar = document.createElement("div");
  summaryBar.className = "summary-bar";

  const clauseList = document.createElement("div");
  clauseList.className = "clause-list";

  const addSelect = document.createElement("select");
  addSelect.appendChild(option("", "add clause on..."));
  for (const feature of state.features) addSelect.appendChild(option(feature.name));
  addSelect.addEventListener("change", () => {
    if (!addSelect.value) return;
    builder!.addClause(addSelect.value);
    addSelect.value = "";
    renderBuilderControls(summaryBar, clauseList);
  });

  const outcomeSelect = document.createElement("select");
  const numeric = state.features.filter((f: FeatureInfo) => f.kind === "numeric");
  for (const feature of numeric) outcomeSelect.appendChild(option(feature.name));

  const submit = document.createElement("button");
  submit.textContent = "analyze";
  submit.addEventListener("click", async () => {
    const issues = builder!.problems();
    if (issues.length > 0) {
      renderErrorBanner(reportPane, issues.join("; "));
      return;
    }
    try {
      const report = await state.submitAnalysis({
        filter: builder!.toFilterSpec(),
        outcome: outcomeSelect.value,
      });
      if (report) renderReport(reportPane, report); // null = superseded
    } catch (error) {
      renderErrorBanner(reportPane, describeError(error));
    }
  });

  const outcomeLabel = document.createElement("label");
  outcomeLabel.append("outcome: ", outcomeSelect);
  controlsPane.append(summaryBar, addSelect, clauseList, outcomeLabel, submit);
  renderBuilderControls(summaryBar, clauseList);
}

async function boot(): Promise<void> {
  try {
    const fixtures = await client.listFixtures();
    const picker = document.createElement("select");
    picker.appendChild(option("", "pick a dataset..."));
    for (const fixture of fixtures) {
      picker.appendChild(option(fixture.name, `${fixture.name} — ${fixture.description}`));
    }
    picker.addEventListener("change", () => {
      if (picker.value) void openFixture(picker.value).catch(
        (error) => renderErrorBanner(reportPane, describeError(error)));
    });
    app.prepend(picker);
  } catch (error) {
    renderErrorBanner(reportPane, describeError(error));
  }
}

void boot();

import type { Clause, FeatureInfo, FilterSpec } from "../api/types";

// Control models behind the filter panel. Numeric features get a pair of
// bound inputs (either side optional), categorical features a checklist.
// The builder emits the exact FilterSpec JSON the server's filtering
// module consumes, and can reconstruct its controls from any spec that
// validates against the same catalog (lossless round-trip).

export interface RangeControl {
  kind: "range";
  feature: string;
  lower: number | null;
  upper: number | null;
  lowerInclusive: boolean;
  upperInclusive: boolean;
}

export interface SetControl {
  kind: "set";
  feature: string;
  selected: string[];
}

export type ClauseControl = RangeControl | SetControl;

export class FilterBuilder {
  readonly catalog: FeatureInfo[];
  readonly controls: ClauseControl[] = [];

  constructor(catalog: FeatureInfo[]) {
    this.catalog = catalog;
  }

  private feature(name: string): FeatureInfo {
    const found = this.catalog.find((f) => f.name === name);
    if (!found) throw new Error(`unknown feature '${name}'`);
    return found;
  }

  addClause(featureName: string): ClauseControl {
    const feature = this.feature(featureName);
    const control: ClauseControl =
      feature.kind === "numeric"
        ? { kind: "range", feature: feature.name, lower: null, upper: null,
            lowerInclusive: true, upperInclusive: true }
        : { kind: "set", feature: feature.name, selected: [] };
    this.controls.push(control);
    return control;
  }

  removeClause(index: number): void {
    this.controls.splice(index, 1);
  }

  /** Set a numeric bound; the control clamps so lower <= upper always holds. */
  setBound(index: number, side: "lower" | "upper", value: number | null, inclusive = true): void {
    const control = this.controls[index];
    if (control.kind !== "range") throw new Error("not a range control");
    if (side === "lower") {
      if (value != null && control.upper != null && value > control.upper) value = control.upper;
      control.lower = value;
      control.lowerInclusive = inclusive;
    } else {
      if (value != null && control.lower != null && value < control.lower) value = control.lower;
      control.upper = value;
      control.upperInclusive = inclusive;
    }
  }

  toggleValue(index: number, value: string): void {
    const control = this.controls[index];
    if (control.kind !== "set") throw new Error("not a set control");
    const at = control.selected.indexOf(value);
    if (at >= 0) control.selected.splice(at, 1);
    else control.selected.push(value);
  }

  /** Reasons the current controls cannot be submitted yet (empty if ready). */
  problems(): string[] {
    const out: string[] = [];
    if (this.controls.length === 0) out.push("add at least one clause");
    for (const control of this.controls) {
      if (control.kind === "range" && control.lower == null && control.upper == null) {
        out.push(`${control.feature}: set at least one bound`);
      }
      if (control.kind === "set" && control.selected.length === 0) {
        out.push(`${control.feature}: pick at least one category`);
      }
    }
    return out;
  }

  toFilterSpec(): FilterSpec {
    const issues = this.problems();
    if (issues.length > 0) throw new Error(issues.join("; "));
    return {
      clauses: this.controls.map((control): Clause => {
        if (control.kind === "set") {
          return { feature: control.feature, type: "set", values: [...control.selected] };
        }
        const clause: Clause = { feature: control.feature, type: "range" };
        if (control.lower != null) {
          clause.min = control.lower;
          clause.minInclusive = control.lowerInclusive;
        }
        if (control.upper != null) {
          clause.max = control.upper;
          clause.maxInclusive = control.upperInclusive;
        }
        return clause;
      }),
    };
  }

  static fromFilterSpec(spec: FilterSpec, catalog: FeatureInfo[]): FilterBuilder {
    const builder = new FilterBuilder(catalog);
    for (const clause of spec.clauses) {
      if (clause.type === "range") {
        builder.controls.push({
          kind: "range",
          feature: clause.feature,
          lower: clause.min ?? null,
          upper: clause.max ?? null,
          lowerInclusive: clause.minInclusive ?? true,
          upperInclusive: clause.maxInclusive ?? true,
        });
      } else {
        builder.controls.push({
          kind: "set",
          feature: clause.feature,
          selected: [...clause.values],
        });
      }
    }
    return builder;
  }

  /** One-line conjunction summary for the bar above the controls. */
  summary(): string {
    if (this.controls.length === 0) return "no filter";
    return this.controls
      .map((control) => {
        if (control.kind === "set") {
          return `${control.feature} IN {${control.selected.join(", ")}}`;
        }
        const parts: string[] = [];
        if (control.lower != null) {
          parts.push(`${control.feature} ${control.lowerInclusive ? ">=" : ">"} ${control.lower}`);
        }
        if (control.upper != null) {
          parts.push(`${control.feature} ${control.upperInclusive ? "<=" : "<"} ${control.upper}`);
        }
        return parts.join(" AND ") || `${control.feature}: (no bounds)`;
      })
      .join(" AND ");
  }
}

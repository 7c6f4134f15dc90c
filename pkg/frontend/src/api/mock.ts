// Mock-server mode: a fetch-compatible handler backed by responses
// recorded from a live server (../../fixtures/*.json). Request validation
// mirrors the server's documented rules so contract tests against the mock
// mean something; everything it returns is the recorded JSON, verbatim.

import type { FetchLike } from "./client";
import type { AnalysisRequest, Clause, FeatureInfo, SessionInfo } from "./types";

import fixtureListing from "../../fixtures/fixtures.json";
import confoundedFeatures from "../../fixtures/features_confounded.json";
import housingFeatures from "../../fixtures/features_housing.json";
import goldenReport from "../../fixtures/report.json";

const CATALOGS: Record<string, SessionInfo> = {
  fig1b_confounded: confoundedFeatures as SessionInfo,
  housing: housingFeatures as SessionInfo,
};

interface MockSession {
  fixture: string;
  features: FeatureInfo[];
}

function json(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

function error(status: number, code: string, message: string): Response {
  return json(status, { detail: { code, message } });
}

function checkClause(clause: Clause, index: number, byName: Map<string, FeatureInfo>): string | null {
  if (typeof clause.feature !== "string" || !clause.feature) {
    return `clause ${index}: missing feature name`;
  }
  const feature = byName.get(clause.feature);
  if (!feature) return `unknown feature '${clause.feature}'`;
  if (clause.type === "range") {
    if (feature.kind !== "numeric") {
      return `range clause on categorical feature '${clause.feature}'`;
    }
    if (clause.min == null && clause.max == null) {
      return `clause on '${clause.feature}' has no bounds`;
    }
    if (clause.min != null && typeof clause.min !== "number") return `clause ${index}: min must be a number`;
    if (clause.max != null && typeof clause.max !== "number") return `clause ${index}: max must be a number`;
    if (clause.min != null && clause.max != null && clause.min > clause.max) {
      return `clause on '${clause.feature}': lower bound ${clause.min} exceeds upper bound ${clause.max}`;
    }
    return null;
  }
  if (clause.type === "set") {
    if (feature.kind !== "categorical") {
      return `set clause on numeric feature '${clause.feature}'`;
    }
    if (!Array.isArray(clause.values) || clause.values.length === 0) {
      return `clause on '${clause.feature}' has an empty value set`;
    }
    return null;
  }
  return `clause ${index}: type must be "range" or "set"`;
}

function validateAnalysis(body: AnalysisRequest, features: FeatureInfo[]): Response | null {
  const byName = new Map(features.map((f) => [f.name, f]));
  if (!body || typeof body !== "object" || !body.filter || !Array.isArray(body.filter.clauses)) {
    return error(400, "FILTER_INVALID", 'filter JSON must be an object with a "clauses" list');
  }
  if (body.filter.clauses.length === 0) {
    return error(400, "FILTER_INVALID", "a filter needs at least one clause");
  }
  for (let i = 0; i < body.filter.clauses.length; i++) {
    const problem = checkClause(body.filter.clauses[i], i, byName);
    if (problem) {
      const code = problem.startsWith("unknown feature") ? "UNKNOWN_FEATURE" : "FILTER_INVALID";
      return error(400, code, problem);
    }
  }
  const outcome = byName.get(body.outcome);
  if (!outcome) return error(400, "CONFIG_INVALID", `unknown outcome feature '${body.outcome}'`);
  if (outcome.kind !== "numeric") {
    return error(400, "CONFIG_INVALID", `outcome feature '${body.outcome}' must be numeric`);
  }
  const filterFeatures = new Set(body.filter.clauses.map((c) => c.feature));
  for (const covariate of body.match?.covariates ?? []) {
    if (!byName.has(covariate)) {
      return error(400, "CONFIG_INVALID", `unknown covariate '${covariate}'`);
    }
    if (filterFeatures.has(covariate)) {
      return error(400, "CONFIG_INVALID", `covariate '${covariate}' is a filter feature`);
    }
    if (covariate === body.outcome && !body.match?.allowOutcomeCovariate) {
      return error(400, "CONFIG_INVALID", `covariate '${covariate}' is the outcome`);
    }
  }
  if (body.match?.cfSize != null && body.match.cfSize < 1) {
    return error(400, "CONFIG_INVALID", "cfSize must be at least 1");
  }
  if (body.bins != null && body.bins < 1) {
    return error(400, "CONFIG_INVALID", "bins must be at least 1");
  }
  return null;
}

export function createMockFetch(): FetchLike {
  const sessions = new Map<string, MockSession>();
  let counter = 0;

  return async (input: string, init?: RequestInit): Promise<Response> => {
    const method = (init?.method ?? "GET").toUpperCase();
    const path = input.replace(/^https?:\/\/[^/]+/, "");
    const body = typeof init?.body === "string" ? JSON.parse(init.body) : undefined;

    if (method === "GET" && path === "/fixtures") {
      return json(200, fixtureListing);
    }

    if (method === "POST" && path === "/sessions") {
      const name = body?.fixture;
      const catalog = name ? CATALOGS[name] : undefined;
      if (!catalog) {
        return error(400, "CONFIG_INVALID", `unknown fixture '${name}' in mock mode`);
      }
      const sessionId = `mock-${++counter}`;
      sessions.set(sessionId, { fixture: name, features: catalog.features });
      return json(201, { ...catalog, sessionId });
    }

    const featuresMatch = path.match(/^\/sessions\/([^/]+)\/features$/);
    if (method === "GET" && featuresMatch) {
      const session = sessions.get(featuresMatch[1]);
      if (!session) return error(404, "SESSION_NOT_FOUND", `unknown session '${featuresMatch[1]}'`);
      const catalog = CATALOGS[session.fixture];
      return json(200, { ...catalog, sessionId: featuresMatch[1] });
    }

    const analysisMatch = path.match(/^\/sessions\/([^/]+)\/analysis$/);
    if (method === "POST" && analysisMatch) {
      const session = sessions.get(analysisMatch[1]);
      if (!session) return error(404, "SESSION_NOT_FOUND", `unknown session '${analysisMatch[1]}'`);
      const invalid = validateAnalysis(body as AnalysisRequest, session.features);
      if (invalid) return invalid;
      return json(200, goldenReport);
    }

    const sessionMatch = path.match(/^\/sessions\/([^/]+)$/);
    if (method === "DELETE" && sessionMatch) {
      if (!sessions.delete(sessionMatch[1])) {
        return error(404, "SESSION_NOT_FOUND", `unknown session '${sessionMatch[1]}'`);
      }
      return new Response(null, { status: 204 });
    }

    return error(404, "NOT_FOUND", `${method} ${path} is not part of the mocked API`);
  };
}

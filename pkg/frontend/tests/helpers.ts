import { AnalyzeResponse } from "../src/api.js";

export function fakeReport(
  overrides: Partial<AnalyzeResponse> = {},
): AnalyzeResponse {
  return {
    model_id: "tiny-fixture",
    selector: { layer: null, head: null },
    filters: {
      special: true,
      punctuation: false,
      stopwords: false,
      extra_stopwords: [],
    },
    score_axis: "received",
    words: [
      {
        text: "<s>",
        start: 0,
        end: 0,
        token_count: 1,
        raw: 0.4,
        norm: null,
        filtered: true,
        special: true,
      },
      {
        text: "hello",
        start: 0,
        end: 5,
        token_count: 2,
        raw: 0.1234567,
        norm: 0.0,
        filtered: false,
        special: false,
      },
      {
        text: "world",
        start: 6,
        end: 11,
        token_count: 1,
        raw: 0.25,
        norm: 1.0,
        filtered: false,
        special: false,
      },
    ],
    ...overrides,
  };
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

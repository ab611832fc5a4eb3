// Typed client for the analysis service. The UI never computes scores;
// every number it shows comes verbatim from these responses.

export interface ModelInfo {
  model_id: string;
  layers: number;
  heads: number;
  max_positions: number;
  vocab_size: number;
}

export interface WordEntry {
  text: string;
  start: number;
  end: number;
  token_count: number;
  raw: number;
  norm: number | null;
  filtered: boolean;
  special: boolean;
}

export interface AnalyzeResponse {
  model_id: string;
  selector: { layer: number | null; head: number | null };
  filters: {
    special: boolean;
    punctuation: boolean;
    stopwords: boolean;
    extra_stopwords: string[];
  };
  score_axis: string;
  words: WordEntry[];
}

export interface AnalyzeRequest {
  text: string;
  layer: number | null;
  head: number | null;
  filters: { special: boolean; punctuation: boolean; stopwords: boolean };
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function getJson<T>(url: string): Promise<T> {
  const resp = await fetch(url);
  if (!resp.ok) {
    throw new ApiError(resp.status, `GET ${url} failed: ${resp.status}`);
  }
  return (await resp.json()) as T;
}

export function fetchModelInfo(base = ""): Promise<ModelInfo> {
  return getJson<ModelInfo>(`${base}/api/model`);
}

export async function fetchSample(base = ""): Promise<string> {
  const body = await getJson<{ text: string }>(`${base}/api/sample`);
  return body.text;
}

export async function postAnalyze(
  req: AnalyzeRequest,
  base = "",
  signal?: AbortSignal,
): Promise<AnalyzeResponse> {
  const resp = await fetch(`${base}/api/analyze`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(req),
    signal,
  });
  if (!resp.ok) {
    let detail = `analyze failed: ${resp.status}`;
    try {
      const body = (await resp.json()) as { error?: string };
      if (body.error) detail = body.error;
    } catch {
      // non-JSON error body; keep the status message
    }
    throw new ApiError(resp.status, detail);
  }
  return (await resp.json()) as AnalyzeResponse;
}

/** HTTP client for the tokenize service.
 *
 * At most one tokenize response "wins" at a time: every request gets a
 * sequence number and a response that has been overtaken by a newer
 * request resolves as stale so the caller can drop it.
 */

import { ApiError, SchemeDescriptor, TokenizeResponse } from "./types.js";

export type TokenizeResult =
  | { kind: "ok"; response: TokenizeResponse }
  | { kind: "error"; status: number; error: ApiError }
  | { kind: "stale" };

export class TokenizeClient {
  private sequence = 0;

  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  async fetchTokenizers(): Promise<SchemeDescriptor[]> {
    const response = await this.fetchFn(`${this.baseUrl}/api/tokenizers`);
    if (!response.ok) {
      throw new Error(`tokenizer listing failed with ${response.status}`);
    }
    return (await response.json()) as SchemeDescriptor[];
  }

  async tokenize(
    file: Blob,
    scheme: string,
    config: Record<string, number> | null = null,
  ): Promise<TokenizeResult> {
    const ticket = ++this.sequence;
    const body = new FormData();
    body.append("file", file, "upload.mid");
    body.append("scheme", scheme);
    if (config && Object.keys(config).length > 0) {
      body.append("config", JSON.stringify(config));
    }
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}/api/tokenize`, {
        method: "POST",
        body,
      });
    } catch (err) {
      if (ticket !== this.sequence) return { kind: "stale" };
      const message = err instanceof Error ? err.message : String(err);
      return { kind: "error", status: 0, error: { type: "NetworkError", message } };
    }
    const payload = await response.json();
    if (ticket !== this.sequence) return { kind: "stale" };
    if (!response.ok) {
      const error: ApiError = payload?.error ?? { type: "UnknownError" };
      return { kind: "error", status: response.status, error };
    }
    return { kind: "ok", response: payload as TokenizeResponse };
  }
}

export function describeError(status: number, error: ApiError): string {
  const what = error.reason ?? error.message ?? error.type;
  return error.field ? `${error.field}: ${what}` : `${what} (HTTP ${status})`;
}

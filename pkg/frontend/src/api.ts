import type {
  ApiSessionState,
  Language,
  Performer,
  RecordingEntry,
  SignItem,
  StatsRow,
} from "./types.js";

export class ApiRequestError extends Error {
  constructor(
    public readonly status: number,
    message: string,
    public readonly state?: string,
  ) {
    super(message);
    this.name = "ApiRequestError";
  }
}

/** Thin typed client over the capture service's JSON API. */
export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, init);
    const text = await response.text();
    const body = text ? JSON.parse(text) : null;
    if (!response.ok) {
      const message = body?.error ?? body?.detail ?? `HTTP ${response.status}`;
      throw new ApiRequestError(response.status, String(message), body?.state);
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  listLanguages(): Promise<Language[]> {
    return this.request("/api/languages");
  }

  defineLanguage(name: string): Promise<Language> {
    return this.post("/api/languages", { name });
  }

  listItems(category?: string, search = ""): Promise<SignItem[]> {
    const params = new URLSearchParams();
    if (category) params.set("category", category);
    if (search) params.set("search", search);
    const query = params.toString();
    return this.request(`/api/items${query ? "?" + query : ""}`);
  }

  defineItem(name: string, category: string, languageId: number): Promise<SignItem> {
    return this.post("/api/items", { name, category, language_id: languageId });
  }

  listPerformers(): Promise<Performer[]> {
    return this.request("/api/performers");
  }

  definePerformer(name: string, age: number, phone = ""): Promise<Performer> {
    return this.post("/api/performers", { name, age, phone });
  }

  listRecordings(): Promise<RecordingEntry[]> {
    return this.request("/api/recordings");
  }

  async stats(): Promise<StatsRow[]> {
    const body = await this.request<{ categories: StatsRow[] }>("/api/stats");
    return body.categories;
  }

  createSession(itemId: number, performerId: number): Promise<ApiSessionState> {
    return this.post("/api/sessions", { item_id: itemId, performer_id: performerId });
  }

  getSession(id: string): Promise<ApiSessionState> {
    return this.request(`/api/sessions/${id}`);
  }

  sessionAction(id: string, action: string): Promise<ApiSessionState> {
    return this.post(`/api/sessions/${id}/${action}`, {});
  }

  previewUrl(): string {
    const base = this.baseUrl || (typeof location !== "undefined" ? location.origin : "");
    return base.replace(/^http/, "ws") + "/api/preview";
  }
}

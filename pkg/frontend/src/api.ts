import type { Label, NextReply, Stats, SubmitReply } from './types.js';

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number | null = null,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

/** Thin typed client over the fixed review endpoints. */
export class ReviewApi {
  constructor(
    private readonly base: string = '',
    private readonly fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.base + path, init);
    } catch (err) {
      throw new ApiError(`network failure: ${(err as Error).message}`);
    }
    if (!response.ok) {
      throw new ApiError(`HTTP ${response.status} on ${path}`, response.status);
    }
    return (await response.json()) as T;
  }

  next(exclude: number[] = []): Promise<NextReply> {
    const query = exclude.length ? `?exclude=${exclude.join(',')}` : '';
    return this.request<NextReply>(`/api/review/next${query}`);
  }

  submit(id: number, label: Label): Promise<SubmitReply> {
    return this.request<SubmitReply>(`/api/review/${id}`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ label }),
    });
  }

  stats(): Promise<Stats> {
    return this.request<Stats>('/api/review/stats');
  }
}

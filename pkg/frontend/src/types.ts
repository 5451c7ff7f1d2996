/** Payload shapes of the review HTTP API. */

export type Label = 'Relevant' | 'NotRelevant';

export interface IocSpan {
  type: string;
  value: string;
  start: number;
  end: number;
}

export interface KeywordSpan {
  word: string;
  start: number;
  end: number;
}

export interface ReviewItem {
  id: number;
  category: string;
  full_text: string;
  ioc_spans: IocSpan[];
  keyword_spans: KeywordSpan[];
  rule_outcome: string;
  queued: number;
}

export interface QueueDone {
  done: true;
  queued: number;
}

export type NextReply = ReviewItem | QueueDone;

export function isDone(reply: NextReply): reply is QueueDone {
  return (reply as QueueDone).done === true;
}

export interface SubmitReply {
  ok: boolean;
  queued: number;
}

export interface Stats {
  queued: number;
  decided: number;
  relevant: number;
  not_relevant: number;
}

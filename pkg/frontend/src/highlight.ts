import type { IocSpan, KeywordSpan } from './types.js';

export type SegmentKind = 'plain' | 'ioc' | 'keyword';

export interface Segment {
  text: string;
  kind: SegmentKind;
  start: number;
  end: number;
  /** IoC type or matched keyword, for tooltips. */
  tag?: string;
}

interface Range {
  start: number;
  end: number;
  kind: 'ioc' | 'keyword';
  tag: string;
}

/**
 * Split text into plain/highlighted segments from the server's match spans.
 *
 * Spans are half-open [start, end) offsets into full_text. Overlaps resolve
 * in favor of IoC spans (they carry more reviewer signal); out-of-bounds or
 * inverted spans are dropped rather than risking drifted highlights.
 */
export function segmentText(
  text: string,
  iocSpans: IocSpan[],
  keywordSpans: KeywordSpan[],
): Segment[] {
  const ranges: Range[] = [];
  for (const span of iocSpans) {
    ranges.push({ start: span.start, end: span.end, kind: 'ioc', tag: span.type });
  }
  for (const span of keywordSpans) {
    ranges.push({ start: span.start, end: span.end, kind: 'keyword', tag: span.word });
  }

  const usable = ranges
    .filter((r) => r.start >= 0 && r.end <= text.length && r.start < r.end)
    .sort((a, b) => a.start - b.start || (a.kind === 'ioc' ? -1 : 1));

  const kept: Range[] = [];
  let cursorEnd = 0;
  for (const range of usable) {
    if (range.start < cursorEnd) continue; // overlap: first (IoC-priority) wins
    kept.push(range);
    cursorEnd = range.end;
  }

  const segments: Segment[] = [];
  let cursor = 0;
  for (const range of kept) {
    if (range.start > cursor) {
      segments.push({
        text: text.slice(cursor, range.start),
        kind: 'plain',
        start: cursor,
        end: range.start,
      });
    }
    segments.push({
      text: text.slice(range.start, range.end),
      kind: range.kind,
      start: range.start,
      end: range.end,
      tag: range.tag,
    });
    cursor = range.end;
  }
  if (cursor < text.length) {
    segments.push({ text: text.slice(cursor), kind: 'plain', start: cursor, end: text.length });
  }
  return segments;
}

function escapeHtml(raw: string): string {
  return raw
    .replaceAll('&', '&amp;')
    .replaceAll('<', '&lt;')
    .replaceAll('>', '&gt;')
    .replaceAll('"', '&quot;');
}

/** Render segments as HTML, highlight spans wrapped in <mark> elements. */
export function renderSegments(segments: Segment[]): string {
  return segments
    .map((segment) => {
      const safe = escapeHtml(segment.text);
      if (segment.kind === 'plain') return safe;
      const title = escapeHtml(segment.tag ?? '');
      return `<mark class="${segment.kind}" title="${title}">${safe}</mark>`;
    })
    .join('');
}

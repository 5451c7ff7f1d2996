import { ReviewApi } from './api.js';
import { renderSegments, segmentText } from './highlight.js';
import { ReviewSession } from './session.js';
import type { Label } from './types.js';

const api = new ReviewApi('');
const session = new ReviewSession(api);

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const postText = el<HTMLDivElement>('post-text');
const postMeta = el<HTMLDivElement>('post-meta');
const banner = el<HTMLDivElement>('banner');
const statsPanel = el<HTMLDivElement>('stats');
const buttons = {
  relevant: el<HTMLButtonElement>('btn-relevant'),
  notRelevant: el<HTMLButtonElement>('btn-not-relevant'),
  skip: el<HTMLButtonElement>('btn-skip'),
  retry: el<HTMLButtonElement>('btn-retry'),
};

function render(): void {
  const { phase, current, stats, error } = session;

  banner.hidden = phase !== 'error';
  buttons.retry.hidden = phase !== 'error';
  if (error) {
    banner.textContent = `Request failed (${error.message}). Nothing was lost - retry when ready.`;
  }

  const reviewing = phase === 'reviewing' && current !== null;
  buttons.relevant.disabled = !reviewing;
  buttons.notRelevant.disabled = !reviewing;
  buttons.skip.disabled = !reviewing;

  if (current) {
    postMeta.textContent =
      `#${current.id} - ${current.category} - ${current.queued} in queue`;
    const segments = segmentText(current.full_text, current.ioc_spans, current.keyword_spans);
    postText.innerHTML = renderSegments(segments);
  } else if (phase === 'done') {
    postMeta.textContent = 'queue empty';
    postText.textContent = 'All posts reviewed. Rerun the label stage to build the full dataset.';
  } else if (phase === 'loading') {
    postMeta.textContent = '';
    postText.textContent = 'loading...';
  }

  if (stats) {
    statsPanel.textContent =
      `queued ${stats.queued} | decided ${stats.decided} ` +
      `(${stats.relevant} relevant / ${stats.not_relevant} not relevant)` +
      ` | this session ${session.decidedHere}`;
  }
}

async function act(action: () => Promise<unknown>): Promise<void> {
  await action();
  render();
}

function decide(label: Label): void {
  void act(() => session.decide(label));
}

buttons.relevant.addEventListener('click', () => decide('Relevant'));
buttons.notRelevant.addEventListener('click', () => decide('NotRelevant'));
buttons.skip.addEventListener('click', () => void act(() => session.skip()));
buttons.retry.addEventListener('click', () => void act(() => session.retry()));

document.addEventListener('keydown', (event) => {
  if (event.target instanceof HTMLInputElement) return;
  const key = event.key.toLowerCase();
  if (key === 'r') decide('Relevant');
  else if (key === 'n') decide('NotRelevant');
  else if (key === 's') void act(() => session.skip());
});

void act(() => session.start());

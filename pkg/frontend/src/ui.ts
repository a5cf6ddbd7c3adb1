/** Thin DOM layer: renders the view model into the three panes. All logic
 * lives in model.ts/timeline.ts; this file only builds elements. */

import type { ApprovalRequest, PolicySummary, SessionSummary } from './api.js';
import { badgeClass, type ConsoleState } from './model.js';
import { timelineItems } from './timeline.js';
import type { TraceEvent } from './api.js';

export interface UiHandlers {
  onDecide(requestId: string, decision: 'approve' | 'deny'): void;
  onSelectSession(sessionId: string): void;
  onShowPolicy(policyId: string): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function render(root: HTMLElement, state: ConsoleState, handlers: UiHandlers): void {
  const banner = root.querySelector('#banner') as HTMLElement;
  banner.textContent = state.gatewayOk ? state.notice ?? '' : state.notice ?? 'Gateway unreachable';
  banner.className = state.gatewayOk ? (state.notice ? 'notice' : 'hidden') : 'banner-error';

  renderQueue(root.querySelector('#queue') as HTMLElement, state, handlers);
  renderSession(root.querySelector('#session') as HTMLElement, state.session, state.timeline, handlers);
  renderPolicies(root.querySelector('#policies') as HTMLElement, state.policies, handlers);
}

function renderQueue(pane: HTMLElement, state: ConsoleState, handlers: UiHandlers): void {
  pane.replaceChildren();
  pane.appendChild(el('h2', undefined, `Pending approvals (${state.pending.length})`));
  if (state.pending.length === 0) {
    pane.appendChild(el('p', 'empty', 'Nothing is waiting for approval.'));
    return;
  }
  for (const request of state.pending) {
    pane.appendChild(requestCard(request, state, handlers));
  }
}

function requestCard(
  request: ApprovalRequest,
  state: ConsoleState,
  handlers: UiHandlers,
): HTMLElement {
  const card = el('div', 'card');
  card.appendChild(el('div', 'card-title', `${request.tool_name}`));
  card.appendChild(el('div', 'card-line', `policy ${request.policy}`));
  card.appendChild(
    el('div', 'card-line mono', JSON.stringify(request.tool_arguments)),
  );
  card.appendChild(el('div', 'card-line', `requested ${request.requested_at}`));

  const sessionLink = el('a', 'card-link', `session ${request.session.slice(0, 8)}…`);
  sessionLink.href = '#';
  sessionLink.addEventListener('click', (event) => {
    event.preventDefault();
    handlers.onSelectSession(request.session);
  });
  card.appendChild(sessionLink);

  const actions = el('div', 'actions');
  const inFlight = state.decisionsInFlight.includes(request.id);
  for (const decision of ['approve', 'deny'] as const) {
    const button = el('button', decision, decision);
    button.disabled = inFlight;
    button.addEventListener('click', () => handlers.onDecide(request.id, decision));
    actions.appendChild(button);
  }
  card.appendChild(actions);
  return card;
}

function renderSession(
  pane: HTMLElement,
  session: SessionSummary | null,
  timeline: TraceEvent[],
  handlers: UiHandlers,
): void {
  pane.replaceChildren();
  pane.appendChild(el('h2', undefined, 'Session timeline'));
  if (session === null) {
    pane.appendChild(el('p', 'empty', 'Select a session from the queue.'));
    return;
  }
  const header = el('div', 'session-header');
  header.appendChild(el('span', `badge ${badgeClass(session.phase)}`, session.phase));
  header.appendChild(el('span', 'session-input', session.user_input));
  pane.appendChild(header);
  if (session.block_message) {
    pane.appendChild(el('p', 'block-message', session.block_message));
  }

  const list = el('ol', 'timeline');
  for (const item of timelineItems(timeline)) {
    const entry = el('li', `timeline-item tone-${item.tone}`);
    entry.appendChild(el('span', `badge badge-${item.badge}`, item.badge));
    entry.appendChild(el('span', 'timeline-title', item.title));
    if (item.subtitle) entry.appendChild(el('div', 'timeline-subtitle', item.subtitle));
    if (item.justification) {
      entry.appendChild(el('div', 'justification', `resolver: ${item.justification}`));
    }
    list.appendChild(entry);
  }
  pane.appendChild(list);
}

function renderPolicies(
  pane: HTMLElement,
  policies: PolicySummary[],
  handlers: UiHandlers,
): void {
  pane.replaceChildren();
  pane.appendChild(el('h2', undefined, 'Policies'));
  if (policies.length === 0) {
    pane.appendChild(el('p', 'empty', 'No policies in the store.'));
    return;
  }
  const table = el('table', 'policies');
  const head = el('tr');
  for (const column of ['id', 'kind', 'priority', 'enabled']) {
    head.appendChild(el('th', undefined, column));
  }
  table.appendChild(head);
  for (const policy of policies) {
    const row = el('tr', policy.enabled ? '' : 'disabled');
    const idCell = el('td');
    const link = el('a', 'card-link', policy.id);
    link.href = '#';
    link.addEventListener('click', (event) => {
      event.preventDefault();
      handlers.onShowPolicy(policy.id);
    });
    idCell.appendChild(link);
    row.appendChild(idCell);
    row.appendChild(el('td', undefined, policy.kind));
    row.appendChild(el('td', undefined, String(policy.priority)));
    row.appendChild(el('td', undefined, policy.enabled ? 'yes' : 'no'));
    table.appendChild(row);
  }
  pane.appendChild(table);
}

export function showPolicyMarkdown(root: HTMLElement, policyId: string, markdown: string): void {
  const viewer = root.querySelector('#policy-viewer') as HTMLElement;
  viewer.replaceChildren();
  viewer.appendChild(el('h3', undefined, policyId));
  viewer.appendChild(el('pre', 'mono', markdown));
  viewer.classList.remove('hidden');
}

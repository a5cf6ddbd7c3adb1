/** Console bootstrap: wires the gateway client, the long-poll loop, and the
 * pure view model into the DOM. The console issues no state-changing call
 * other than the decision endpoint. */

import { ApiError, GatewayClient } from './api.js';
import {
  beginDecision,
  completeDecision,
  conflictDecision,
  failDecision,
  initialState,
  mergeTrace,
  nextFromSequence,
  selectSession,
  withConnectionIssue,
  withPending,
  withPolicies,
  withSession,
  type ConsoleState,
} from './model.js';
import { ApprovalPoller } from './poll.js';
import { render, showPolicyMarkdown } from './ui.js';

const ACTOR_STORAGE_KEY = 'govgate.actor';
const TIMELINE_REFRESH_MS = 1000;

function gatewayBase(): string {
  const fromQuery = new URLSearchParams(window.location.search).get('gateway');
  if (fromQuery) return fromQuery;
  return '';
}

function main(): void {
  const root = document.getElementById('app')!;
  const client = new GatewayClient(gatewayBase());
  let state: ConsoleState = initialState();

  const actorInput = document.getElementById('actor') as HTMLInputElement;
  actorInput.value = localStorage.getItem(ACTOR_STORAGE_KEY) ?? '';
  actorInput.addEventListener('change', () => {
    localStorage.setItem(ACTOR_STORAGE_KEY, actorInput.value);
  });

  const handlers = {
    onDecide(requestId: string, decision: 'approve' | 'deny'): void {
      const actor = actorInput.value.trim() || 'console-operator';
      const begun = beginDecision(state, requestId);
      if (!begun.allowed) return;
      update(begun.state);
      client
        .decide(requestId, decision, actor)
        .then((result) => {
          update(completeDecision(state, requestId));
          if (state.selectedSession === result.session_id) {
            void refreshSession(result.session_id);
          }
        })
        .catch((error) => {
          if (error instanceof ApiError && error.status === 409) {
            update(conflictDecision(state, requestId));
            void refreshPending();
            if (state.selectedSession) void refreshSession(state.selectedSession);
          } else {
            update(failDecision(state, requestId, `Decision failed: ${error.message}`));
          }
        });
    },
    onSelectSession(sessionId: string): void {
      update(selectSession(state, sessionId));
      void refreshSession(sessionId);
    },
    onShowPolicy(policyId: string): void {
      client
        .getPolicyMarkdown(policyId)
        .then((markdown) => showPolicyMarkdown(root, policyId, markdown))
        .catch((error) => update(failDecision(state, '', `Policy load failed: ${error.message}`)));
    },
  };

  function update(next: ConsoleState): void {
    state = next;
    render(root, state, handlers);
  }

  async function refreshPending(): Promise<void> {
    try {
      update(withPending(state, await client.pendingApprovals()));
    } catch (error) {
      update(withConnectionIssue(state, `Gateway unreachable: ${(error as Error).message}`));
    }
  }

  async function refreshSession(sessionId: string): Promise<void> {
    try {
      const summary = await client.getSession(sessionId);
      update(withSession(state, summary));
      const events = await client.fetchTrace(sessionId, nextFromSequence(state));
      update(mergeTrace(state, sessionId, events));
    } catch (error) {
      update(withConnectionIssue(state, `Session load failed: ${(error as Error).message}`));
    }
  }

  async function refreshPolicies(): Promise<void> {
    try {
      update(withPolicies(state, await client.listPolicies()));
    } catch (error) {
      update(withConnectionIssue(state, `Policy list failed: ${(error as Error).message}`));
    }
  }

  const poller = new ApprovalPoller(client, {
    onPending(pending) {
      update(withPending(state, pending));
    },
    onError(message) {
      update(withConnectionIssue(state, `Gateway unreachable, retrying: ${message}`));
    },
  });

  window.setInterval(() => {
    if (state.selectedSession) void refreshSession(state.selectedSession);
  }, TIMELINE_REFRESH_MS);

  update(state);
  void refreshPending();
  void refreshPolicies();
  void poller.start();
}

main();

/** Console view model: pure state + reducers, so every UI behavior is
 * testable without a DOM. The whole state is reconstructable from gateway
 * reads; refreshing the page loses nothing but the selection. */

import type { ApprovalRequest, PolicySummary, SessionSummary, TraceEvent } from './api.js';

export interface ConsoleState {
  pending: ApprovalRequest[];
  gatewayOk: boolean;
  notice: string | null;
  selectedSession: string | null;
  session: SessionSummary | null;
  timeline: TraceEvent[];
  policies: PolicySummary[];
  /** request ids with a decision POST in flight; blocks double submission */
  decisionsInFlight: string[];
}

export function initialState(): ConsoleState {
  return {
    pending: [],
    gatewayOk: true,
    notice: null,
    selectedSession: null,
    session: null,
    timeline: [],
    policies: [],
    decisionsInFlight: [],
  };
}

/** Pending queue straight from the gateway; its order (oldest first) is kept. */
export function withPending(state: ConsoleState, pending: ApprovalRequest[]): ConsoleState {
  return { ...state, pending, gatewayOk: true };
}

export function withConnectionIssue(state: ConsoleState, message: string): ConsoleState {
  return { ...state, gatewayOk: false, notice: message };
}

export function withNotice(state: ConsoleState, notice: string | null): ConsoleState {
  return { ...state, notice };
}

export function withPolicies(state: ConsoleState, policies: PolicySummary[]): ConsoleState {
  return { ...state, policies };
}

export function selectSession(state: ConsoleState, sessionId: string | null): ConsoleState {
  if (sessionId === state.selectedSession) return state;
  return { ...state, selectedSession: sessionId, session: null, timeline: [] };
}

export function withSession(state: ConsoleState, session: SessionSummary): ConsoleState {
  if (session.session_id !== state.selectedSession) return state;
  return { ...state, session };
}

/** Append newly streamed events; ignores duplicates, keeps sequence order. */
export function mergeTrace(
  state: ConsoleState,
  sessionId: string,
  events: TraceEvent[],
): ConsoleState {
  if (sessionId !== state.selectedSession) return state;
  const known = new Set(state.timeline.map((event) => event.sequence));
  const merged = [...state.timeline, ...events.filter((e) => !known.has(e.sequence))];
  merged.sort((a, b) => a.sequence - b.sequence);
  return { ...state, timeline: merged };
}

/** The from_sequence to request next: one past the newest known event. */
export function nextFromSequence(state: ConsoleState): number {
  if (state.timeline.length === 0) return 0;
  return state.timeline[state.timeline.length - 1].sequence + 1;
}

export function beginDecision(
  state: ConsoleState,
  requestId: string,
): { state: ConsoleState; allowed: boolean } {
  if (state.decisionsInFlight.includes(requestId)) {
    return { state, allowed: false };
  }
  return {
    state: { ...state, decisionsInFlight: [...state.decisionsInFlight, requestId] },
    allowed: true,
  };
}

function clearInFlight(state: ConsoleState, requestId: string): ConsoleState {
  return {
    ...state,
    decisionsInFlight: state.decisionsInFlight.filter((id) => id !== requestId),
  };
}

/** A decision landed (200): drop the request from the queue. */
export function completeDecision(state: ConsoleState, requestId: string): ConsoleState {
  return {
    ...clearInFlight(state, requestId),
    pending: state.pending.filter((request) => request.id !== requestId),
    notice: null,
  };
}

/** Someone else resolved it first (409): drop it and say so. */
export function conflictDecision(state: ConsoleState, requestId: string): ConsoleState {
  return {
    ...clearInFlight(state, requestId),
    pending: state.pending.filter((request) => request.id !== requestId),
    notice: 'Request was already resolved elsewhere; queue refreshed.',
  };
}

/** Network failure: the request stays in the queue for retry. */
export function failDecision(state: ConsoleState, requestId: string, message: string): ConsoleState {
  return { ...clearInFlight(state, requestId), notice: message };
}

const BADGE_BY_PHASE: Record<string, string> = {
  blocked: 'danger',
  denied: 'danger',
  failed: 'danger',
  awaiting_approval: 'warning',
  completed: 'ok',
};

export function badgeClass(phase: string): string {
  return BADGE_BY_PHASE[phase] ?? 'neutral';
}

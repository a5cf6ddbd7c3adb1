/** Turns raw trace events into renderable timeline items: one badge per
 * checkpoint decision or lifecycle milestone, with the fired policy ids and
 * the resolver's justification when a semantic pick happened. */

import type { TraceEvent } from './api.js';

export interface TimelineItem {
  sequence: number;
  at: string;
  badge: 'intent' | 'playbook' | 'guides' | 'code' | 'approval' | 'tools' | 'formatter' | 'lifecycle';
  tone: 'danger' | 'warning' | 'ok' | 'neutral';
  title: string;
  subtitle: string | null;
  justification: string | null;
}

function firedPolicies(event: TraceEvent): string {
  const fired = event.decision?.fired ?? [];
  return fired.map(([policyId]) => policyId).join(', ');
}

export function timelineItems(events: TraceEvent[]): TimelineItem[] {
  const items: TimelineItem[] = [];
  for (const event of events) {
    const kind = String(event.detail.event ?? '');
    const justification = event.decision?.resolver_verdict?.justification ?? null;
    const base = { sequence: event.sequence, at: event.at, justification };
    switch (kind) {
      case 'session_created':
        items.push({
          ...base,
          badge: 'lifecycle',
          tone: 'neutral',
          title: 'Session created',
          subtitle: String(event.detail.user_input ?? ''),
        });
        break;
      case 'blocked':
        items.push({
          ...base,
          badge: 'intent',
          tone: 'danger',
          title: `Intent blocked${event.decision?.selected ? ` by ${event.decision.selected}` : ''}`,
          subtitle: String(event.detail.block_message ?? event.detail.error ?? ''),
        });
        break;
      case 'intent_clear':
        items.push({
          ...base,
          badge: 'intent',
          tone: 'ok',
          title: 'Intent cleared',
          subtitle: firedPolicies(event) || null,
        });
        break;
      case 'playbook_injected':
        items.push({
          ...base,
          badge: 'playbook',
          tone: 'ok',
          title: `Playbook injected: ${event.detail.policy}`,
          subtitle: null,
        });
        break;
      case 'tools_enriched': {
        const applied = (event.detail.applied as [string, string][] | undefined) ?? [];
        items.push({
          ...base,
          badge: 'guides',
          tone: applied.length ? 'ok' : 'neutral',
          title: applied.length
            ? `Guides applied to ${applied.length} tool(s)`
            : 'No tool guides applied',
          subtitle: applied.map(([policyId, tool]) => `${policyId} -> ${tool}`).join(', ') || null,
        });
        break;
      }
      case 'code_generated':
        items.push({
          ...base,
          badge: 'code',
          tone: 'neutral',
          title: 'Code generated',
          subtitle: String(event.detail.code ?? '').slice(0, 160) || null,
        });
        break;
      case 'approval_pending':
        items.push({
          ...base,
          badge: 'approval',
          tone: 'warning',
          title: `Approval required: ${event.detail.tool_name}`,
          subtitle: `policy ${event.detail.policy}, request ${event.detail.request_id}`,
        });
        break;
      case 'auto_approved':
        items.push({
          ...base,
          badge: 'approval',
          tone: 'ok',
          title: `Auto-approved: ${event.detail.tool_name}`,
          subtitle: `policy ${event.detail.policy}`,
        });
        break;
      case 'approval_resolved':
        items.push({
          ...base,
          badge: 'approval',
          tone: event.detail.decision === 'approve' ? 'ok' : 'danger',
          title: `Approval ${event.detail.decision}d by ${event.detail.actor}`,
          subtitle: `tool ${event.detail.tool_name}`,
        });
        break;
      case 'tool_invoked':
        items.push({
          ...base,
          badge: 'tools',
          tone: 'neutral',
          title: `Tool invoked: ${event.detail.tool_name}`,
          subtitle: null,
        });
        break;
      case 'response_formatted':
        items.push({
          ...base,
          badge: 'formatter',
          tone: 'ok',
          title: `Response formatted by ${event.detail.policy}`,
          subtitle: String(event.detail.diagnostic ?? '') || null,
        });
        break;
      case 'response_passthrough':
        items.push({
          ...base,
          badge: 'formatter',
          tone: 'neutral',
          title: 'Response passed through unformatted',
          subtitle: String(event.detail.diagnostic ?? '') || null,
        });
        break;
      case 'session_completed':
        items.push({
          ...base,
          badge: 'lifecycle',
          tone: 'ok',
          title: 'Session completed',
          subtitle: null,
        });
        break;
      case 'session_failed':
        items.push({
          ...base,
          badge: 'lifecycle',
          tone: 'danger',
          title: 'Session failed',
          subtitle: String(event.detail.reason ?? ''),
        });
        break;
      default:
        // phase transitions and other heartbeat noise stay off the timeline
        break;
    }
  }
  return items;
}

/** Typed client for the govgate gateway JSON/NDJSON endpoints. */

export interface ApprovalRequest {
  id: string;
  session: string;
  policy: string;
  tool_name: string;
  tool_arguments: Record<string, unknown>;
  requested_at: string;
  status: 'pending' | 'approved' | 'denied' | 'auto_approved';
  resolved_by: string | null;
  resolved_at: string | null;
}

export interface SessionSummary {
  session_id: string;
  phase: string;
  user_input: string;
  app_id: string | null;
  playbook_policy_id: string | null;
  block_message: string | null;
  pending_request_id: string | null;
  final_response: unknown;
  failure: string | null;
  tool_invocations: string[];
}

export interface ResolverVerdict {
  selected_index: number;
  confidence: number;
  justification: string;
}

export interface PolicyDecisionRecord {
  checkpoint: string;
  fired: [string, { matched: boolean; score: number | null; matched_query: string | null }][];
  selected: string | null;
  resolver_verdict: ResolverVerdict | null;
  phase: string;
}

export interface TraceEvent {
  sequence: number;
  session: string;
  checkpoint: string;
  decision: PolicyDecisionRecord | null;
  detail: Record<string, unknown>;
  at: string;
}

export interface PolicySummary {
  id: string;
  kind: string;
  priority: number;
  enabled: boolean;
}

export interface DecisionResult {
  request_id: string;
  status: string;
  session_id: string;
  session_phase: string;
}

export type Decision = 'approve' | 'deny';

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function throwApiError(response: Response): Promise<never> {
  let code = 'http_error';
  let message = `${response.status}`;
  try {
    const body = (await response.json()) as { code?: string; message?: string };
    if (body.code) code = body.code;
    if (body.message) message = body.message;
  } catch {
    // non-JSON error body; keep the defaults
  }
  throw new ApiError(response.status, code, message);
}

export class GatewayClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, '') + path;
  }

  async pendingApprovals(): Promise<ApprovalRequest[]> {
    const response = await this.fetchImpl(this.url('/v1/approvals/pending'));
    if (!response.ok) await throwApiError(response);
    return (await response.json()) as ApprovalRequest[];
  }

  /** Long poll; resolves with the pending list, or null when the gateway
   * answered 204 (nothing became pending within the timeout). */
  async watchApprovals(timeoutS: number): Promise<ApprovalRequest[] | null> {
    const response = await this.fetchImpl(
      this.url(`/v1/approvals/watch?timeout_s=${encodeURIComponent(timeoutS)}`),
    );
    if (response.status === 204) return null;
    if (!response.ok) await throwApiError(response);
    return (await response.json()) as ApprovalRequest[];
  }

  async decide(requestId: string, decision: Decision, actor: string): Promise<DecisionResult> {
    const response = await this.fetchImpl(
      this.url(`/v1/approvals/${encodeURIComponent(requestId)}/decision`),
      {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify({ decision, actor }),
      },
    );
    if (!response.ok) await throwApiError(response);
    return (await response.json()) as DecisionResult;
  }

  async getSession(sessionId: string): Promise<SessionSummary> {
    const response = await this.fetchImpl(
      this.url(`/v1/sessions/${encodeURIComponent(sessionId)}`),
    );
    if (!response.ok) await throwApiError(response);
    return (await response.json()) as SessionSummary;
  }

  /** Incremental trace fetch: only events with sequence >= fromSequence. */
  async fetchTrace(sessionId: string, fromSequence = 0): Promise<TraceEvent[]> {
    const response = await this.fetchImpl(
      this.url(
        `/v1/sessions/${encodeURIComponent(sessionId)}/trace?from_sequence=${fromSequence}`,
      ),
    );
    if (!response.ok) await throwApiError(response);
    const text = await response.text();
    return text
      .split('\n')
      .filter((line) => line.trim().length > 0)
      .map((line) => JSON.parse(line) as TraceEvent);
  }

  async listPolicies(kind?: string): Promise<PolicySummary[]> {
    const query = kind ? `?kind=${encodeURIComponent(kind)}` : '';
    const response = await this.fetchImpl(this.url(`/v1/policies${query}`));
    if (!response.ok) await throwApiError(response);
    return (await response.json()) as PolicySummary[];
  }

  async getPolicyMarkdown(policyId: string): Promise<string> {
    const response = await this.fetchImpl(
      this.url(`/v1/policies/${encodeURIComponent(policyId)}`),
    );
    if (!response.ok) await throwApiError(response);
    return await response.text();
  }
}

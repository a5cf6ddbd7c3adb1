#!/usr/bin/env python3
"""Regenerate the builtin suites under src/govgate/builtin/.

The backoffice suite is the 26-task ablation: 12 tasks the ungoverned agent
already passes, 5 capability-boundary tasks fixed by the boundary playbook,
2 unreliable-tool tasks fixed by the warning guide, 1 multi-endpoint metric
task and 1 average-vs-total task fixed only by the full five-policy config,
and 5 tasks designed to keep failing. The demo suite covers the guard /
approval / playbook / formatter walkthrough scenarios.
"""

from __future__ import annotations

import json
from pathlib import Path

from govgate.enact.approvals import ApprovalDecision
from govgate.enact.engine import AgentEmission
from govgate.enact.session import SessionPhase
from govgate.harness.agent import AgentStep, CueOverride
from govgate.harness.scenario import Expectation, Scenario
from govgate.model.parsing import parse_policy_file

ROOT = Path(__file__).resolve().parent.parent / "src" / "govgate" / "builtin"

BOUNDARY_CUE = "Decline out-of-scope requests directly"
WARNING_CUE = "known to be unreliable"
METRICS_CUE = "definitions_and_methodology"
AVERAGE_CUE = "divide the aggregate total"
PLAYBOOK_CUE = "<policy:playbook"
PAGINATION_CUE = "Iterate every result page"

RELIABLE_TOOLS = [
    ("requisition_count", "Count of currently open requisitions.", {"count": 57}),
    ("open_positions", "Number of open positions.", {"positions": 18}),
    ("candidate_pipeline", "Candidates per pipeline stage.", {"screen": 120, "interview": 45, "offer": 9}),
    ("requisition_details_v2", "Stable requisition detail lookup.", {"id": "REQ-3", "title": "Data Engineer", "status": "open"}),
    ("definitions_and_methodology", "Metric definitions; includes the total requisitions used for computation.", {"total_requisitions_for_computation": 1047}),
    ("metadata_and_timeframe", "Report metadata: similar requisitions analysed and timeframe.", {"similar_requisitions_analyzed": 40, "timeframe_days": 180}),
    ("candidate_aggregate_total", "Aggregate candidate count across similar requisitions.", {"total_candidates": 2913}),
    ("similar_requisitions_count", "Count of similar requisitions analysed.", {"count": 40}),
    ("funnel_status_detailed", "Granular funnel counts per stage.", {"applied": 310, "screened": 122}),
    ("source_breakdown", "Every configured sourcing channel.", {"sources": ["LinkedIn", "Dice", "GitHub"]}),
    ("hiring_velocity", "Average days from requisition to offer.", {"days_to_offer": 23}),
    ("offer_acceptance_rate", "Fraction of offers accepted.", {"rate": 0.82}),
    ("time_in_stage", "Average days spent per stage.", {"screen_days": 4, "interview_days": 9}),
]

UNRELIABLE_TOOLS = [
    ("funnel_status", "Funnel status summary.", {"error": "503 service unavailable"}),
    ("model_registry", "Registry of reporting models.", {"models": None, "note": "stale registry data"}),
    ("source_recommendation_summary", "Shortcut summary of sourcing metrics.", {"summary_requisitions": 40, "top_source": "LinkedIn"}),
    ("requisition_details", "Legacy requisition detail lookup.", {"error": "schema violation"}),
    ("job_board_sync", "Sync status with external job boards.", {"error": "503 service unavailable"}),
    ("sla_monitor", "SLA margins per requisition.", {"error": "type mismatch"}),
    ("geography_filter", "Filter requisitions by region.", {"error": "503 service unavailable"}),
    ("job_card_service", "Job card details.", {"error": "schema violation"}),
    ("funnel_timing", "Stage-to-stage timing.", {"error": "503 service unavailable"}),
    ("description_renderer", "Rendered job descriptions.", {"error": "503 service unavailable"}),
    ("legacy_pipeline_export", "Legacy pipeline export.", {"error": "timeout"}),
    ("candidate_dedupe", "Candidate de-duplication report.", {"error": "type mismatch"}),
    ("stage_history", "Historical stage movements.", {"error": "schema violation"}),
    ("bulk_update_service", "Bulk record updates.", {"error": "503 service unavailable"}),
    ("notification_digest", "Notification digest.", {"error": "timeout"}),
    ("interview_loop_summary", "Interview loop summary.", {"error": "schema violation"}),
    ("comp_band_lookup", "Compensation band lookup.", {"error": "type mismatch"}),
    ("headcount_forecast", "Headcount forecast.", {"error": "503 service unavailable"}),
    ("req_aging_report", "Requisition aging report.", {"error": "timeout"}),
]

UNRELIABLE_NAMES = [name for name, _, _ in UNRELIABLE_TOOLS]


def step(code="", response=None, arguments=None, overrides=(), reads=True) -> AgentStep:
    return AgentStep(
        emission=AgentEmission(code=code, response=response, arguments=arguments or {}),
        overrides=tuple(overrides),
        reads_prompt_directives=reads,
    )


def override(cue, code="", response=None, arguments=None) -> CueOverride:
    return CueOverride(
        cue=cue,
        emission=AgentEmission(code=code, response=response, arguments=arguments or {}),
    )


def backoffice_policies() -> dict[str, str]:
    boundary_keywords = [
        "job description",
        "time-to-fill",
        "geography",
        "sla deadline",
        "funnel timing",
        "job card",
    ]
    policies = {}
    policies["api-capability-boundaries"] = f"""---
id: api-capability-boundaries
kind: playbook
priority: 90
triggers:
- type: keyword
  keywords: {json.dumps(boundary_keywords)}
  mode: or
  case_sensitive: false
  fuzzy_max_edits: 0
  target: user_input
- type: natural_language
  queries:
  - which job boards show the full job description
  - what is the time to fill for these requisitions
  - filter the requisitions by geography or region
  threshold: 0.65
  target: user_input
steps:
- instruction: Compare the request against the supported API capabilities before calling anything.
- instruction: Decline out-of-scope requests directly instead of asking for a requisition id or invoking unrelated endpoints.
  expected_outcome: A clear statement that the request cannot be answered with the available APIs.
---
The reporting APIs cover requisition counts, pipeline stages, funnel detail,
sourcing channels, velocity, and acceptance metrics. No API exposes job
descriptions, time-to-fill, geography filters, SLA deadlines, funnel timing,
or job cards. Decline out-of-scope requests directly; do not request a
requisition id and do not invoke unrelated endpoints.
"""
    policies["error-prone-tool-warnings"] = f"""---
id: error-prone-tool-warnings
kind: tool_guide
priority: 60
placement: prepend
tools: {json.dumps(UNRELIABLE_NAMES)}
triggers:
- type: application
  app_id: backoffice
---
WARNING: this endpoint is known to be unreliable (5xx errors, schema
violations, type mismatches). Prefer the stable granular endpoints; if this
tool must be used and fails, recover by re-routing to a reliable alternative.
"""
    policies["multi-endpoint-metrics"] = """---
id: multi-endpoint-metrics
kind: playbook
priority: 80
triggers:
- type: keyword
  keywords: ["total requisitions used", "used for computation"]
  mode: or
  case_sensitive: false
  fuzzy_max_edits: 0
  target: user_input
- type: natural_language
  queries:
  - how many total requisitions were used for the computation
  threshold: 0.65
  target: user_input
steps:
- instruction: Call one granular endpoint per metric instead of any summary shortcut.
- instruction: Read the total requisitions used for computation from definitions_and_methodology, not from metadata_and_timeframe.
  expected_outcome: The computation total (not the similar-requisitions count).
  allowed_tools: [definitions_and_methodology, metadata_and_timeframe]
---
For multi-metric questions, call the specific endpoint for each metric.
definitions_and_methodology returns the total requisitions used for
computation; metadata_and_timeframe returns the count of similar
requisitions analysed. Never substitute one for the other and never rely on
a single summary endpoint.
"""
    policies["average-vs-total"] = """---
id: average-vs-total
kind: playbook
priority: 70
triggers:
- type: keyword
  keywords: ["usually get", "on average", "typical"]
  mode: or
  case_sensitive: false
  fuzzy_max_edits: 0
  target: user_input
- type: natural_language
  queries:
  - how many candidates do we usually get
  threshold: 0.65
  target: user_input
---
When the user asks for an average or typical value, you must divide the aggregate total
by the count of similar requisitions instead of returning the raw total.
Fetch both numbers, then report the per-requisition average.
"""
    policies["missing-id-vs-unsupported"] = """---
id: missing-id-vs-unsupported
kind: playbook
priority: 85
triggers:
- type: keyword
  keywords: ["without a requisition id", "no requisition id"]
  mode: or
  case_sensitive: false
  fuzzy_max_edits: 0
  target: user_input
- type: natural_language
  queries:
  - can you answer this without a requisition id
  threshold: 0.6
  target: user_input
---
Distinguish between questions that are answerable once a requisition id is
supplied and questions no API supports at all. Ask for the id only in the
first case; otherwise decline out-of-scope requests directly.
"""
    return policies


def backoffice_scenarios() -> list[Scenario]:
    scenarios: list[Scenario] = []
    full_policy_set = [
        "api-capability-boundaries",
        "error-prone-tool-warnings",
        "multi-endpoint-metrics",
        "average-vs-total",
        "missing-id-vs-unsupported",
    ]

    def scenario(sid, user_input, steps, expected, approval=None):
        scenarios.append(
            Scenario(
                id=sid,
                user_input=user_input,
                policy_set=tuple(full_policy_set),
                agent_steps=tuple(steps),
                app_id="backoffice",
                approval=approval,
                expected=expected,
            )
        )

    stable = [
        ("s01-open-requisitions", "How many requisitions are currently open?",
         "requisition_count()", "There are 57 requisitions currently open.",
         ("requisition_count",), "57"),
        ("s02-open-positions", "How many open positions do we have right now?",
         "open_positions()", "We have 18 open positions right now.",
         ("open_positions",), "18"),
        ("s03-pipeline-stages", "Show the candidate pipeline by stage.",
         "candidate_pipeline()", "Pipeline: 120 in screen, 45 in interview, 9 at offer.",
         ("candidate_pipeline",), "120"),
        ("s04-requisition-status", "What is the status of requisition REQ-3?",
         "requisition_details_v2(id='REQ-3')", "REQ-3 (Data Engineer) is open.",
         ("requisition_details_v2",), "open"),
        ("s05-hiring-velocity", "What is our hiring velocity in days?",
         "hiring_velocity()", "We average 23 days from requisition to offer.",
         ("hiring_velocity",), "23"),
        ("s06-acceptance-rate", "What is the offer acceptance rate?",
         "offer_acceptance_rate()", "The offer acceptance rate is 82%.",
         ("offer_acceptance_rate",), "82"),
        ("s07-time-in-stage", "How long do candidates spend in each stage?",
         "time_in_stage()", "Candidates spend 4 days in screen and 9 days in interview.",
         ("time_in_stage",), "9 days"),
        ("s08-sourcing-channels", "Which sourcing channels are configured?",
         "source_breakdown()", "Configured sources: LinkedIn, Dice, GitHub.",
         ("source_breakdown",), "Dice"),
        ("s09-detailed-funnel", "Show me the detailed funnel counts.",
         "funnel_status_detailed()", "310 applied and 122 screened so far.",
         ("funnel_status_detailed",), "310"),
        ("s10-candidate-total", "How many candidates are in the pipeline overall?",
         "candidate_aggregate_total()", "There are 2913 candidates overall.",
         ("candidate_aggregate_total",), "2913"),
        ("s11-similar-requisitions", "How many similar requisitions were analysed?",
         "similar_requisitions_count()", "40 similar requisitions were analysed.",
         ("similar_requisitions_count",), "40"),
        ("s12-report-window", "How many days of data does the report cover?",
         "metadata_and_timeframe()", "The report covers 180 days of data.",
         ("metadata_and_timeframe",), "180"),
    ]
    for sid, text, code, response, tools, needle in stable:
        scenario(
            sid,
            text,
            [step(code=code, response=response)],
            Expectation(
                terminal_phase=SessionPhase.COMPLETED,
                tool_invocations=tools,
                response={"contains": needle},
            ),
        )

    decline = (
        "This cannot be answered with the available APIs; the capability is out of scope."
    )
    boundary = [
        ("b01-job-description", "Which job boards display the full job description for REQ-7?",
         "description_renderer(req='REQ-7')",
         "The job description is rendered on the board page."),
        ("b02-time-to-fill", "What is the time-to-fill for engineering requisitions?",
         "sla_monitor(team='engineering')",
         "Time-to-fill is tracked by the SLA monitor."),
        ("b03-geography", "Filter requisitions by geography for the EMEA region.",
         "geography_filter(region='EMEA')",
         "Here are the EMEA requisitions."),
        ("b04-sla-deadline", "What is the sla deadline for requisition REQ-9?",
         "sla_monitor(req='REQ-9')",
         "The SLA deadline is next Friday."),
        ("b05-funnel-timing", "Show funnel timing for the last quarter.",
         "funnel_timing(quarter='last')",
         "Funnel timing is attached."),
    ]
    for sid, text, bad_code, bad_response in boundary:
        scenario(
            sid,
            text,
            [
                step(
                    code=bad_code,
                    response=bad_response,
                    overrides=[override(BOUNDARY_CUE, code="", response=decline)],
                )
            ],
            Expectation(
                terminal_phase=SessionPhase.COMPLETED,
                tool_invocations=(),
                response={"contains": "cannot be answered"},
            ),
        )

    scenario(
        "u01-funnel-status",
        "What is the current funnel status for REQ-12?",
        [
            step(
                code="funnel_status(req='REQ-12')",
                response="The funnel service returned a 503 error.",
                overrides=[
                    override(
                        WARNING_CUE,
                        code="funnel_status_detailed(req='REQ-12')",
                        response="Funnel for REQ-12: 310 applied, 122 screened.",
                    )
                ],
            )
        ],
        Expectation(
            terminal_phase=SessionPhase.COMPLETED,
            tool_invocations=("funnel_status_detailed",),
            response={"contains": "310"},
        ),
    )
    scenario(
        "u02-data-sources",
        "Which data sources feed the candidate reports?",
        [
            step(
                code="model_registry()",
                response="The model registry lists the data sources.",
                overrides=[
                    override(
                        WARNING_CUE,
                        code="source_breakdown()",
                        response="The reports are fed by LinkedIn, Dice, and GitHub.",
                    )
                ],
            )
        ],
        Expectation(
            terminal_phase=SessionPhase.COMPLETED,
            tool_invocations=("source_breakdown",),
            response={"contains": "GitHub"},
        ),
    )

    scenario(
        "m01-multi-metric",
        "Report applications, interviews, and the total requisitions used for computation.",
        [
            step(
                code="source_recommendation_summary()",
                response="The summary reports 40 requisitions used for computation.",
                overrides=[
                    override(
                        METRICS_CUE,
                        code=(
                            "candidate_pipeline()\n"
                            "definitions_and_methodology()"
                        ),
                        response=(
                            "120 applications in screen, 45 interviews, and 1047 total "
                            "requisitions were used for computation."
                        ),
                    )
                ],
            )
        ],
        Expectation(
            terminal_phase=SessionPhase.COMPLETED,
            tool_invocations=("candidate_pipeline", "definitions_and_methodology"),
            response={"contains": "1047"},
        ),
    )

    scenario(
        "a01-average-candidates",
        "How many candidates do we usually get per requisition?",
        [
            step(
                code="candidate_aggregate_total()",
                response="We usually get 2913 candidates.",
                overrides=[
                    override(
                        AVERAGE_CUE,
                        code=(
                            "candidate_aggregate_total()\n"
                            "similar_requisitions_count()"
                        ),
                        response=(
                            "On average about 73 candidates per requisition "
                            "(2913 across 40 similar requisitions)."
                        ),
                    )
                ],
            )
        ],
        Expectation(
            terminal_phase=SessionPhase.COMPLETED,
            tool_invocations=("candidate_aggregate_total", "similar_requisitions_count"),
            response={"contains": "73"},
        ),
    )

    failing = [
        ("f01-source-details", "List every sourcing channel with complete details.",
         "source_recommendation_summary()",
         "LinkedIn is the main sourcing channel.",
         {"contains": "GitHub"}),
        ("f02-stage-percentages", "What percentage of candidates pass each stage?",
         "funnel_status()",
         "Stage percentages are unavailable (503).",
         {"regex": "\\d+%"}),
        ("f03-policy-summary", "Summarize the interview scheduling policy in one sentence.",
         "",
         "See the HR portal for details.",
         {"contains": "policy states"}),
        ("f04-negative-sla", "Which skills have negative SLA margins across all open requisitions?",
         "sla_monitor(scope='all')",
         "Unable to compute SLA margins.",
         {"contains": "margin report"}),
        ("f05-uzlxbr-details", "What are the full details for requisition UZLXBR?",
         "requisition_details(id='UZLXBR')",
         "The requisition service errored for UZLXBR.",
         {"contains": "cannot be answered"}),
    ]
    for sid, text, code, response, predicate in failing:
        scenario(
            sid,
            text,
            [step(code=code, response=response)],
            Expectation(terminal_phase=SessionPhase.COMPLETED, response=predicate),
        )

    return scenarios


def demo_policies() -> dict[str, str]:
    policies = {}
    policies["crm-delete-guard"] = """---
id: crm-delete-guard
kind: intent_guard
priority: 95
block_message: 'Blocked by policy: bulk deletion of CRM contacts is not permitted.'
triggers:
- type: keyword
  keywords: [delete, crm]
  mode: and
  case_sensitive: false
  fuzzy_max_edits: 1
  target: user_input
- type: natural_language
  queries:
  - delete every contact in crm
  - wipe all crm contacts
  threshold: 0.7
  target: user_input
---
"""
    policies["database-drop-approval"] = """---
id: database-drop-approval
kind: tool_approval
priority: 80
patterns: ['drop_*']
auto_approve: false
---
"""
    policies["healthcare-provider-playbook"] = """---
id: healthcare-provider-playbook
kind: playbook
priority: 85
triggers:
- type: natural_language
  queries:
  - find primary care doctors near me
  - locate a primary care physician nearby
  threshold: 0.3
  target: user_input
steps:
- instruction: Retrieve the active insurance coverage and extract the contract uid and brand code.
  expected_outcome: Contract uid and brand code available for downstream calls.
  allowed_tools: [get_active_coverage]
- instruction: Map the requested specialty to the internal service code with find_care_suggestions.
  expected_outcome: Service code 25 for primary care.
  allowed_tools: [find_care_suggestions]
- instruction: Run the paginated provider search restricted to in-network providers.
  allowed_tools: [search_providers]
- instruction: Aggregate the results into a single table for the user.
---
Structured provider search: extract coverage context first, map the
specialty to its service code, then search providers page by page keeping
only in-network results.
"""
    policies["pagination-tool-guide"] = """---
id: pagination-tool-guide
kind: tool_guide
priority: 60
placement: append
tools: [search_providers]
triggers:
- type: application
  app_id: healthcare
---
Critical pagination requirement: Iterate every result page until the
response reports no further pages; partial scans miss providers.
"""
    policies["provider-results-formatter"] = """---
id: provider-results-formatter
kind: output_formatter
priority: 50
mode: markdown
triggers:
- type: keyword
  keywords: [providers]
  mode: or
  case_sensitive: false
  fuzzy_max_edits: 0
  target: final_response
---
"""
    policies["ack-template-formatter"] = """---
id: ack-template-formatter
kind: output_formatter
priority: 40
mode: template
template: Request received.
triggers:
- type: keyword
  keywords: [reimbursement]
  mode: or
  case_sensitive: false
  fuzzy_max_edits: 0
  target: user_input
---
"""
    return policies


DEMO_TOOLS = [
    ("get_active_coverage", "Active insurance coverage for the current user.",
     {"contract_uid": "CTR-889", "brand_code": "OAK"}),
    ("find_care_suggestions", "Map a natural-language specialty to its service code.",
     {"service_code": 25}),
    ("search_providers", "Paginated provider search.",
     {"providers": 14, "network": "in-network", "pages": 3}),
    ("lookup_contacts", "List CRM contacts.", {"contacts": 1248}),
    ("crm_delete_contacts", "Delete CRM contacts in bulk.", {"deleted": 1248}),
    ("drop_database", "Drop an entire database.", {"dropped": True}),
]

PROVIDER_TABLE = (
    "| Provider | Network |\n| --- | --- |\n"
    + "\n".join(f"| Dr. Provider {i:02d} | in-network |" for i in range(1, 15))
)


def demo_scenarios() -> list[Scenario]:
    scenarios = []
    scenarios.append(
        Scenario(
            id="d01-crm-delete-blocked",
            user_input="delete every contact in CRM",
            policy_set=("crm-delete-guard",),
            agent_steps=(
                step(
                    code="lookup_contacts()\ncrm_delete_contacts()",
                    response="Deleted all contacts.",
                ),
            ),
            app_id="crm",
            expected=Expectation(
                terminal_phase=SessionPhase.BLOCKED,
                tool_invocations=(),
            ),
        )
    )
    scenarios.append(
        Scenario(
            id="d02-crm-delete-unguarded",
            user_input="delete every contact in CRM",
            policy_set=(),
            agent_steps=(
                step(
                    code="lookup_contacts()\ncrm_delete_contacts()",
                    response="Deleted 1248 contacts from the CRM.",
                ),
            ),
            app_id="crm",
            expected=Expectation(
                terminal_phase=SessionPhase.COMPLETED,
                tool_invocations=("lookup_contacts", "crm_delete_contacts"),
                response={"contains": "1248"},
            ),
        )
    )
    drop_step = step(
        code="lookup_contacts()\ndrop_database(name='analytics')",
        response="The analytics database was dropped.",
        arguments={"drop_database": {"name": "analytics"}},
    )
    scenarios.append(
        Scenario(
            id="d03-drop-database-denied",
            user_input="Please clean up: drop the analytics database.",
            policy_set=("database-drop-approval",),
            agent_steps=(drop_step,),
            app_id="crm",
            approval=ApprovalDecision.DENY,
            expected=Expectation(
                terminal_phase=SessionPhase.DENIED,
                tool_invocations=(),
            ),
        )
    )
    scenarios.append(
        Scenario(
            id="d04-drop-database-approved",
            user_input="Please clean up: drop the analytics database.",
            policy_set=("database-drop-approval",),
            agent_steps=(drop_step,),
            app_id="crm",
            approval=ApprovalDecision.APPROVE,
            expected=Expectation(
                terminal_phase=SessionPhase.COMPLETED,
                tool_invocations=("lookup_contacts", "drop_database"),
                response={"contains": "dropped"},
            ),
        )
    )
    scenarios.append(
        Scenario(
            id="d05-healthcare-provider-search",
            user_input="find primary care doctors near me",
            policy_set=(
                "healthcare-provider-playbook",
                "pagination-tool-guide",
                "provider-results-formatter",
            ),
            agent_steps=(
                step(
                    code="search_providers(specialty='primary care')",
                    response="Here are some doctors nearby.",
                    overrides=[
                        override(
                            PAGINATION_CUE,
                            code=(
                                "get_active_coverage()\n"
                                "find_care_suggestions(specialty='primary care')\n"
                                "search_providers(code=25, network='in-network')"
                            ),
                            arguments={
                                "find_care_suggestions": {"specialty": "primary care"},
                                "search_providers": {"code": 25, "network": "in-network"},
                            },
                            response=(
                                "All pages scanned: 14 in-network primary care providers found."
                            ),
                        )
                    ],
                ),
            ),
            app_id="healthcare",
            formatter={"restructure": PROVIDER_TABLE},
            expected=Expectation(
                terminal_phase=SessionPhase.COMPLETED,
                tool_invocations=(
                    "get_active_coverage",
                    "find_care_suggestions",
                    "search_providers",
                ),
                response={"contains": "| Provider | Network |"},
            ),
        )
    )
    scenarios.append(
        Scenario(
            id="d06-template-acknowledgement",
            user_input="Submit my reimbursement request.",
            policy_set=("ack-template-formatter",),
            agent_steps=(
                step(code="", response="I will process the reimbursement shortly."),
            ),
            app_id="healthcare",
            expected=Expectation(
                terminal_phase=SessionPhase.COMPLETED,
                tool_invocations=(),
                response={"equals": "Request received."},
            ),
        )
    )
    return scenarios


def write_suite(name, manifest, policies, tools, scenarios):
    base = ROOT / name
    (base / "policies").mkdir(parents=True, exist_ok=True)
    (base / "scenarios").mkdir(parents=True, exist_ok=True)
    (base / "suite.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    tool_entries = [
        {"name": tool_name, "description": description, "parameters": {}, "returns": returns}
        for tool_name, description, returns in tools
    ]
    (base / "tools.json").write_text(json.dumps(tool_entries, indent=2) + "\n", encoding="utf-8")
    for pid, text in policies.items():
        parse_policy_file(text)  # refuse to ship an invalid policy
        (base / "policies" / f"{pid}.md").write_text(text, encoding="utf-8")
    for scenario in scenarios:
        path = base / "scenarios" / f"{scenario.id}.json"
        path.write_text(json.dumps(scenario.to_dict(), indent=2) + "\n", encoding="utf-8")


def main():
    write_suite(
        "backoffice",
        {
            "name": "backoffice",
            "configs": {
                "none": [],
                "two": ["api-capability-boundaries", "error-prone-tool-warnings"],
                "five": [
                    "api-capability-boundaries",
                    "error-prone-tool-warnings",
                    "multi-endpoint-metrics",
                    "average-vs-total",
                    "missing-id-vs-unsupported",
                ],
            },
        },
        backoffice_policies(),
        RELIABLE_TOOLS + UNRELIABLE_TOOLS,
        backoffice_scenarios(),
    )
    write_suite(
        "demo",
        {
            "name": "demo",
            "configs": {
                "none": [],
                "default": [
                    "crm-delete-guard",
                    "database-drop-approval",
                    "healthcare-provider-playbook",
                    "pagination-tool-guide",
                    "provider-results-formatter",
                    "ack-template-formatter",
                ],
            },
        },
        demo_policies(),
        DEMO_TOOLS,
        demo_scenarios(),
    )
    print(f"wrote suites under {ROOT}")


if __name__ == "__main__":
    main()

"""gw-report/1 documents: a JSON form for scripts and a plain-text rendering.

Reports carry no timestamps or paths that vary between runs, and JSON is
written with sorted keys, so identical jobs give byte-identical files.
"""

import json

REPORT_SCHEMA = "gw-report/1"


def new_report(command: str, algebra, N: int, config: dict) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "command": command,
        "algebra": {"name": algebra.name, "hash": algebra.content_hash(),
                    "characteristic": algebra.p, "dimension": algebra.dim},
        "max_degree": N,
        "config": config,
        "sections": [],
    }


def add_section(report: dict, name: str, passed: bool, **body) -> dict:
    section = {"name": name, "passed": bool(passed), **body}
    report["sections"].append(section)
    return section


def finalize(report: dict) -> dict:
    report["passed"] = all(s["passed"] for s in report["sections"])
    return report


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def render_text(report: dict) -> str:
    a = report["algebra"]
    lines = [f"{report['schema']} {report['command']}  algebra={a['name']} p={a['characteristic']} "
             f"dim={a['dimension']} N={report['max_degree']}"]
    for s in report["sections"]:
        lines.append(f"[{'PASS' if s['passed'] else 'FAIL'}] {s['name']}")
        for row in s.get("rows", []):
            lines.append("    " + _row_text(row))
        for c in s.get("checks", []):
            mark = "ok  " if c["passed"] else "FAIL"
            lines.append(f"    {mark} {c['name']}")
        if "note" in s:
            lines.append(f"    {s['note']}")
    lines.append("PASSED" if report.get("passed") else "FAILED")
    return "\n".join(lines) + "\n"


def _row_text(row: dict) -> str:
    return "  ".join(f"{k}={row[k]}" for k in sorted(row))

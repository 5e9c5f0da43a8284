"""Rendering of command results as aligned text, JSON or CSV.

All renderers are deterministic: dictionaries keep insertion order, and the
callers insert characters and cusps in lexicographic order.
"""

import csv
import io
import json


def to_json(data):
    return json.dumps(data, indent=2)


def to_csv(header, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def format_group(data):
    """Text for a LocalizedAbelianGroup dict: reduced factors and the full group."""
    reduced = data["reduced"]
    text = " + ".join(f"Z/{n}" for n in reduced) if reduced else "trivial"
    if data["inverted"]:
        primes = ",".join(str(p) for p in data["inverted"])
        full = " + ".join(f"Z/{n}" for n in data["group"]) if data["group"] else "0"
        text += f"  (away from {primes}; full {full})"
    return text


def table(header, rows):
    """Left-aligned columns separated by two spaces."""
    cells = [[str(c) for c in header]] + [[str(c) for c in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


UNKNOWN = "unknown (excluded case)"


def torsion_text(summary):
    lines = [
        f"Level: {summary['modulus']}  [{summary['setting']}]",
        "Constants: k={k} b={b} a={a}".format(**summary["constants"]),
        "",
        f"J(F)_Tor:  {format_group(summary['jacobian_torsion'])}",
        f"J~(F)_Tor: {format_group(summary['gen_jacobian_torsion'])}",
    ]
    if "prime_level_order" in summary:
        lines.append(f"Prime level: cyclic of full order {summary['prime_level_order']}")
        if "stated_formula_order" in summary:
            flag = "agrees" if summary["stated_formula_agrees"] else "DISAGREES (suspected typo)"
            lines.append(f"  literature formula q^d/(q^2-1, q^d-1) = {summary['stated_formula_order']}: {flag}")
    lines.append(f"mu_F copies in ker(J~ -> J): {summary['mu_torsion_rank']}")
    lines.append("")
    rows = []
    for e, entry in summary["epart_table"].items():
        rows.append([e, summary["d"][e], format_group(entry["M"]), format_group(entry["M_tilde"])])
    lines.append(table(["e", "d(e)", "M^e", "M~^e"], rows))
    if summary["ell_parts"]:
        lines.append("")
        ells = list(summary["ell_parts"])
        rows = []
        for e in summary["d"]:
            row = [e]
            for ell in ells:
                column = summary["ell_parts"][ell]
                row.append(UNKNOWN if column is None else column[e])
            rows.append(row)
        lines.append(table(["e"] + [f"ell={ell}" for ell in ells], rows))
        for ell, group in summary["gen_jacobian_ell_parts"].items():
            if group is not None:
                lines.append(f"J~(F){{{ell}}} (M2'): {format_group(group)}")
    return "\n".join(lines)


def torsion_csv(summary):
    rows = []
    for e, entry in summary["epart_table"].items():
        rows.append([
            e,
            summary["d"][e],
            " ".join(str(n) for n in entry["M"]["reduced"]),
            " ".join(str(n) for n in entry["M_tilde"]["reduced"]),
        ])
    return to_csv(["character", "d", "M_reduced", "M_tilde_reduced"], rows)


def delta_text(summary):
    lines = [f"Level: {summary['modulus']}", ""]
    rows = [[r["character"], r["order"], r["image"]["order"]] for r in summary["orders"]]
    lines.append(table(["e", "ord delta(D^e)", "representative order"], rows))
    lines.append("")
    for i, order in summary["basis_orders"].items():
        lines.append(f"ord delta([1]-[1/p_{i}]) = {order}")
    for e, c in summary["c_constants"].items():
        lines.append(f"c({e}, w_inf) = {c}")
    lines.append("")
    lines.append("Kernel generators:")
    lines.extend(f"  {g}" for g in summary["kernel_generators"])
    lines.append(f"C cap ker delta: {format_group(summary['kernel_subgroup'])}")
    lines.append(f"Image of delta on C: {format_group(summary['delta_cokernel'])}")
    return "\n".join(lines)


def delta_csv(summary):
    rows = [[r["character"], r["order"]] for r in summary["orders"]]
    return to_csv(["character", "delta_order"], rows)


def verify_text(report_dict, checks=None):
    lines = []
    for suite, counts in report_dict["counts"].items():
        lines.append(f"{suite:12s} passed {counts['passed']:6d}  failed {counts['failed']:4d}")
    for failure in report_dict["failures"]:
        lines.append(f"FAILED [{failure['suite']}] {failure['name']} {failure['detail']}".rstrip())
    if checks:
        lines.append("")
        lines.extend(f"{'ok  ' if c.passed else 'FAIL'} [{c.suite}] {c.name}" for c in checks)
    lines.append(report_dict["status"])
    return "\n".join(lines)


def verify_csv(checks):
    return to_csv(["suite", "name", "passed", "detail"], [[c.suite, c.name, c.passed, c.detail] for c in checks])


def hecke_text(modulus, rows):
    header = ["p", "divisor action", "D3 Eisenstein", "L0 exponent two", "C~ Eisenstein", "obstruction"]
    body = []
    for row in rows:
        data = row.to_dict()
        verdict = data["obstruction"]
        obstruction = "-" if verdict is None else ("nonzero" if verdict["nonzero"] else "zero")
        body.append([
            data["prime"],
            data["divisor_action"],
            data["d3_eisenstein"],
            data["l0_exponent_two"],
            data["ctilde_eisenstein"],
            obstruction,
        ])
    return f"Level: {modulus}\n" + table(header, body)


def hecke_csv(rows):
    header = ["prime", "divisor_action", "d3_eisenstein", "l0_exponent_two", "ctilde_eisenstein", "obstruction"]
    body = []
    for row in rows:
        data = row.to_dict()
        verdict = "" if data["obstruction"] is None else data["obstruction"]["nonzero"]
        body.append([data[h] for h in header[:-1]] + [verdict])
    return to_csv(header, body)

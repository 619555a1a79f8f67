"""OpenQASM 2.0 export and a reader for the subset the exporter emits.

Only ``x``, ``h``, ``z``, ``cx`` and ``ccx`` are written. Gates with more than
two controls become a V-chain of Toffolis that computes the running AND of the
controls into ancilla qubits appended after the logical register, hits the
target, then uncomputes the chain. Ancillas start and end in ``|0>``.
"""
from __future__ import annotations

import re

from .errors import ParseError
from .statevector import CCX, CX, H, MCX, X, Z, Circuit, Gate

__all__ = ["circuit_to_qasm", "qasm_to_circuit", "ancilla_count"]

HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";'


def _controls_and_target(gate: Gate) -> tuple[tuple[int, ...], int, str]:
    if isinstance(gate, X):
        return (), gate.target, "x"
    if isinstance(gate, H):
        return (), gate.target, "h"
    if isinstance(gate, Z):
        return (), gate.target, "z"
    if isinstance(gate, CX):
        return (gate.control,), gate.target, "x"
    if isinstance(gate, CCX):
        return (gate.control_a, gate.control_b), gate.target, "x"
    if isinstance(gate, MCX):
        return gate.controls, gate.target, "x"
    # MCZ is symmetric; any member can serve as target.
    return gate.qubits[:-1], gate.qubits[-1], "z"


def _gate_ancillas(gate: Gate) -> int:
    controls, _, _ = _controls_and_target(gate)
    return max(len(controls) - 2, 0)


def ancilla_count(circuit: Circuit) -> int:
    """Ancilla qubits the export of ``circuit`` appends to the register."""
    return max((_gate_ancillas(g) for g in circuit), default=0)


def _v_chain(controls, target, ancillas) -> list[str]:
    c = len(controls)
    compute = [f"ccx q[{controls[0]}],q[{controls[1]}],q[{ancillas[0]}];"]
    for i in range(2, c - 1):
        compute.append(f"ccx q[{controls[i]}],q[{ancillas[i - 2]}],q[{ancillas[i - 1]}];")
    hit = f"ccx q[{controls[c - 1]}],q[{ancillas[c - 3]}],q[{target}];"
    return compute + [hit] + compute[::-1]


def _emit_gate(gate: Gate, ancillas: list[int]) -> list[str]:
    controls, target, kind = _controls_and_target(gate)
    if kind == "z" and not controls:
        return [f"z q[{target}];"]
    if kind == "z":
        # Z = H X H on the target.
        body = _emit_gate(MCX(controls, target), ancillas)
        return [f"h q[{target}];", *body, f"h q[{target}];"]
    if not controls:
        return [f"{kind} q[{target}];"]
    if len(controls) == 1:
        return [f"cx q[{controls[0]}],q[{target}];"]
    if len(controls) == 2:
        return [f"ccx q[{controls[0]}],q[{controls[1]}],q[{target}];"]
    return _v_chain(controls, target, ancillas)


def circuit_to_qasm(circuit: Circuit) -> str:
    """Render ``circuit`` as an OpenQASM 2.0 program with one register ``q``."""
    extra = ancilla_count(circuit)
    n = circuit.qubit_count
    ancillas = list(range(n, n + extra))
    lines = [HEADER]
    if extra:
        lines.append(f"// q[{n}]..q[{n + extra - 1}] are ancillas, |0> in and out")
    lines.append(f"qreg q[{n + extra}];")
    for gate in circuit:
        lines.extend(_emit_gate(gate, ancillas))
    return "\n".join(lines) + "\n"


_STATEMENT = re.compile(r"^([a-z]+)\s+(.*)$")
_QUBIT = re.compile(r"^q\[(\d+)\]$")
_ARITY = {"x": 1, "h": 1, "z": 1, "cx": 2, "ccx": 3}


def qasm_to_circuit(text: str) -> Circuit:
    """Parse the OpenQASM 2.0 subset written by :func:`circuit_to_qasm`.

    The returned circuit spans the whole ``q`` register, ancillas included.
    ``creg``, ``barrier`` and ``measure`` statements are accepted and dropped.
    """
    body = re.sub(r"//[^\n]*", "", text)
    statements = [s.strip() for s in body.split(";")]
    if statements[-1]:
        raise ParseError(f"unterminated statement: {statements[-1]!r}")
    statements = [" ".join(s.split()) for s in statements[:-1] if s]
    if not statements or statements[0] != "OPENQASM 2.0":
        raise ParseError("missing 'OPENQASM 2.0;' header")

    circuit = None
    for stmt in statements[1:]:
        if stmt.startswith("include "):
            continue
        m = _STATEMENT.match(stmt)
        if not m:
            raise ParseError(f"cannot parse statement {stmt!r}")
        op, args = m.groups()
        if op == "qreg":
            if circuit is not None:
                raise ParseError("only a single quantum register is supported")
            reg = re.fullmatch(r"q\[(\d+)\]", args.replace(" ", ""))
            if not reg:
                raise ParseError(f"bad qreg declaration {stmt!r}")
            try:
                circuit = Circuit(int(reg.group(1)))
            except ValueError as exc:
                raise ParseError(str(exc)) from exc
            continue
        if op in ("creg", "barrier", "measure"):
            continue
        if op not in _ARITY:
            raise ParseError(f"unsupported gate {op!r}")
        if circuit is None:
            raise ParseError(f"gate before qreg: {stmt!r}")
        operands = [a.strip() for a in args.split(",")]
        if len(operands) != _ARITY[op]:
            raise ParseError(f"{op} takes {_ARITY[op]} operands: {stmt!r}")
        qubits = []
        for operand in operands:
            qm = _QUBIT.match(operand)
            if not qm:
                raise ParseError(f"bad operand {operand!r} in {stmt!r}")
            qubits.append(int(qm.group(1)))
        try:
            circuit.append({"x": X, "h": H, "z": Z, "cx": CX, "ccx": CCX}[op](*qubits))
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
    if circuit is None:
        raise ParseError("no qreg declaration")
    return circuit

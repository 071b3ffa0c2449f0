"""Command-line interface.

Exit status: 0 success or predicate true, 1 predicate false, non-matching
composition or deadlocked run, 2 input error, 3 budget exhausted.
"""
from __future__ import annotations

import argparse
import os
import re
import sys

from .components import (
    DEFAULT_BUDGET, BudgetExhausted, InseqComponent, Mode, ServiceComponent,
    apply_component, apply_matches, execute, n_requires, properly_subrequires,
    range_requires, requires, subrequires, use_component, use_matches,
)
from .interface import (
    ClassificationError, InterfaceSyntaxError, derivative, filter_complement,
    fmi_split, interface, is_fmi, is_mi, leq, render,
)
from .pglb import (
    Basic, BwdJump, FwdJump, Halt, NegTest, PglbSyntaxError, PosTest,
    occurring_basics, parse_pglb, render_pglb,
)
from .services import (
    ServiceDefinitionError, boolean_register, counter, empty_service,
    load_fsm_service, stack,
)
from .threads import extract, format_tree, unfold

OK, FALSE, INPUT_ERROR, EXHAUSTED = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read(path):
    try:
        with open(path, encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _sections(text, allowed):
    out = {}
    current = None
    for line in text.splitlines():
        # "# " never starts a PGLB instruction, so such lines are comments
        if re.match(r"\s*#(\s|$)", line):
            continue
        m = re.match(r"\s*([a-z]+):(.*)$", line)
        if m and m.group(1) in allowed:
            current = m.group(1)
            if current in out:
                raise UsageError(f"duplicate section {current}:")
            out[current] = [m.group(2)]
        elif line.strip():
            if current is None:
                raise UsageError(f"text outside any section: {line.strip()!r}")
            out[current].append(line)
    return {k: " ".join(v).strip() for k, v in out.items()}


def load_component(path) -> InseqComponent:
    """Read a component bundle with ``interface:``, ``mode:`` and ``body:``."""
    parts = _sections(_read(path), ("interface", "mode", "body"))
    for key in ("interface", "body"):
        if key not in parts:
            raise UsageError(f"{path}: missing {key}: section")
    i = interface(parts["interface"])
    if not is_fmi(i):
        raise UsageError(f"{path}: interface {render(i)} is not a focus-method interface")
    mode = Mode.parse(parts["mode"]) if parts.get("mode") else Mode()
    return InseqComponent(i, parse_pglb(parts["body"]), mode)


def _builtin_service(spec):
    words = spec.split()
    if not words:
        return None
    name, args = words[0], words[1:]
    if name == "empty" and not args:
        return empty_service()
    if name == "stack" and len(args) <= 1:
        return stack(args[0].split(",") if args else ())
    if name == "counter" and len(args) == 1 and args[0].isdigit():
        return counter(int(args[0]))
    if name == "boolreg" and len(args) == 1 and args[0] in ("true", "false"):
        return boolean_register(args[0] == "true")
    return None


def load_service(spec) -> ServiceComponent:
    """A service component from a built-in spec, an FSM file or a service
    component file (``service:`` plus ``interface:``)."""
    h = _builtin_service(spec)
    if h is not None:
        return ServiceComponent(h.mi, h)
    if not os.path.exists(spec):
        raise UsageError(f"unknown service {spec!r}")
    text = _read(spec)
    first = next((ln.split("#", 1)[0].strip() for ln in text.splitlines()
                  if ln.split("#", 1)[0].strip()), "")
    if first.startswith("service "):
        h = load_fsm_service(text)
        return ServiceComponent(h.mi, h)
    parts = _sections(text, ("service", "interface"))
    if "service" not in parts:
        raise UsageError(f"{spec}: missing service: section")
    inner = parts["service"]
    h = _builtin_service(inner)
    if h is None:
        target = os.path.join(os.path.dirname(spec), inner)
        h = load_fsm_service(_read(target))
    j = interface(parts["interface"]) if parts.get("interface") else h.mi
    if not is_mi(j):
        raise UsageError(f"{spec}: interface {render(j)} is not a method interface")
    return ServiceComponent(j, h)


def _describe(ins):
    kinds = {Basic: "basic", PosTest: "positive-test", NegTest: "negative-test",
             FwdJump: "forward-jump", BwdJump: "backward-jump", Halt: "termination"}
    return f"{kinds[type(ins)]} {ins}"


def _bool(out, value):
    print("true" if value else "false", file=out)
    return OK if value else FALSE


def _cmd_normalize(a, out):
    print(render(interface(a.expr)), file=out)
    return OK


def _cmd_eq(a, out):
    return _bool(out, interface(a.left) == interface(a.right))


def _cmd_leq(a, out):
    return _bool(out, leq(interface(a.left), interface(a.right)))


def _cmd_derive(a, out):
    print(render(derivative(a.beta, interface(a.expr))), file=out)
    return OK


def _cmd_filter(a, out):
    print(render(filter_complement(a.beta, interface(a.expr))), file=out)
    return OK


def _cmd_classify(a, out):
    x = interface(a.expr)
    fmi, mi = is_fmi(x), is_mi(x)
    kind = "FMI and MI" if fmi and mi else "FMI" if fmi else "MI" if mi else "neither"
    print(f"{kind}, {len(x)} word{'' if len(x) == 1 else 's'}", file=out)
    if fmi and x:
        for focus, methods in fmi_split(x).items():
            print(f"{focus}: {render(methods)}", file=out)
    return OK


def _cmd_pglb(a, out):
    p = parse_pglb(_read(a.file))
    if a.action == "parse":
        for k, ins in enumerate(p, 1):
            print(f"{k}: {_describe(ins)}", file=out)
    elif a.action == "render":
        print(render_pglb(p), file=out)
    else:
        print(render(occurring_basics(p)), file=out)
    return OK


def _print_thread(t, depth, out):
    if depth is None:
        print(t.render(), file=out)
    else:
        print(format_tree(unfold(t, depth)), file=out)


def _cmd_extract(a, out):
    _print_thread(extract(parse_pglb(_read(a.file))), a.unfold, out)
    return OK


def _cmd_check(a, out):
    mode = Mode.parse(a.mode)
    i = interface(a.interface)
    p = parse_pglb(_read(a.file))
    if mode.kind == "requires":
        value = requires(p, i)
    elif mode.kind == "subrequires":
        value = subrequires(p, i)
    elif mode.kind == "n-requires":
        value = n_requires(p, i, mode.n, mode.sub)
    else:
        value = range_requires(p, i, mode.n, mode.sub)
    if a.proper:
        value = properly_subrequires(p, i)
    return _bool(out, value)


def _cmd_use(a, out):
    c = load_component(a.component)
    s = load_service(a.service)
    matching = use_matches(c, a.focus, s)
    i, t = use_component(c, a.focus, s, a.budget)
    print(render(i), file=out)
    _print_thread(t, a.unfold, out)
    return OK if matching else FALSE


def _cmd_apply(a, out):
    c = load_component(a.component)
    s = load_service(a.service)
    matching = apply_matches(c, a.focus, s)
    j, h = apply_component(c, a.focus, s, a.budget)
    print(render(j), file=out)
    print(h.describe(), file=out)
    return OK if matching else FALSE


def _cmd_run(a, out):
    services = {}
    for binding in a.service:
        focus, sep, spec = binding.partition("=")
        if not sep or not re.fullmatch(r"[A-Za-z][A-Za-z0-9:]*", focus):
            raise UsageError(f"bad --service binding {binding!r}, expected focus=spec")
        services[focus] = load_service(spec).body
    trace, end = execute(extract(parse_pglb(_read(a.file))), services, a.budget)
    for action, reply in trace:
        shown = "no service" if reply is None else str(reply).lower()
        print(f"{action} -> {shown}", file=out)
    print(end, file=out)
    return OK if end == "S" else FALSE


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser():
    parser = _Parser(
        prog="progring",
        description="Focus-method interfaces, PGLB programs and their components.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", help="print the canonical form of an interface")
    p.add_argument("expr")
    p.set_defaults(func=_cmd_normalize)
    for name, func, text in (("eq", _cmd_eq, "equal interfaces"),
                             ("leq", _cmd_leq, "first interface below the second")):
        p = sub.add_parser(name, help=text)
        p.add_argument("left")
        p.add_argument("right")
        p.set_defaults(func=func)
    for name, func in (("derive", _cmd_derive), ("filter", _cmd_filter)):
        p = sub.add_parser(name)
        p.add_argument("beta")
        p.add_argument("expr")
        p.set_defaults(func=func)
    p = sub.add_parser("classify", help="FMI/MI classification and focus split")
    p.add_argument("expr")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("pglb")
    p.add_argument("action", choices=("parse", "render", "basics"))
    p.add_argument("file")
    p.set_defaults(func=_cmd_pglb)
    p = sub.add_parser("extract", help="print the thread of a PGLB program")
    p.add_argument("file")
    p.add_argument("--unfold", type=int, metavar="DEPTH", help="print the unfolded tree instead")
    p.set_defaults(func=_cmd_extract)
    p = sub.add_parser("check", help="requires-family predicate")
    p.add_argument("mode")
    p.add_argument("interface")
    p.add_argument("file")
    p.add_argument("--proper", action="store_true", help="properly subrequires")
    p.set_defaults(func=_cmd_check)

    for name, func in (("use", _cmd_use), ("apply", _cmd_apply)):
        p = sub.add_parser(name)
        p.add_argument("component")
        p.add_argument("focus")
        p.add_argument("service")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        if name == "use":
            p.add_argument("--unfold", type=int, metavar="DEPTH",
                           help="print the unfolded result thread instead")
        p.set_defaults(func=func)
    p = sub.add_parser("run", help="execute a program against services")
    p.add_argument("file")
    p.add_argument("--service", action="append", default=[], metavar="FOCUS=SPEC")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=_cmd_run)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return INPUT_ERROR if e.code else OK
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR
    try:
        return args.func(args, out)
    except BudgetExhausted as e:
        if e.interface is not None:
            print(render(e.interface), file=out)
        print(f"error: {e}", file=sys.stderr)
        return EXHAUSTED
    except (UsageError, InterfaceSyntaxError, PglbSyntaxError, ClassificationError,
            ServiceDefinitionError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()

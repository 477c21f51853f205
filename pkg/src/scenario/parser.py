# parser.py
# ----------------------------------------------------------------
# line-oriented scenario documents: parsing with positioned
# diagnostics, cross-reference validation and serialization
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026

from __future__ import annotations

import re
import shlex
from typing import Dict, List, Optional, Tuple

from src import config
from src.domain.catalog import MethodCatalog, default_catalog
from src.domain.model import (IDENTIFIER, VIAS, AppSpec, ComponentId, ComponentKind,
                              ComponentSpec, FilterSpec, ThreatType)
from src.errors import ScenarioError
from src.scenario.script import (BehaviorScript, ExpectedVerdict, IntentTemplate, LaunchEntry,
                                 Scenario, Step, StepKind, Trigger, ValueRef)

ARROW = "->"
STEP_WORDS = {kind.value: kind for kind in StepKind}
FILTER_KEYS = ("actions", "categories", "schemes", "types", "priority")
SEND_KEYS = ("target", "action", "categories", "type", "scheme")


class _ComponentDraft:
    def __init__(self, cid, kind, exported, line):
        self.id = cid
        self.kind = kind
        self.exported = exported
        self.line = line
        self.filters: List[FilterSpec] = []
        self.scripts: List[Tuple[Trigger, List[Step], int]] = []


class _AppDraft:
    def __init__(self, package, pid, permissions, line):
        self.package = package
        self.pid = pid
        self.permissions = permissions
        self.line = line
        self.components: List[_ComponentDraft] = []


class ScenarioParser:
    """Parses one scenario document. Every error names the offending line and field."""

    def __init__(self, catalog: Optional[MethodCatalog] = None):
        self.catalog = catalog or default_catalog()

    def parse(self, text: str) -> Scenario:
        self.name = None
        self.dataset = "extra"
        self.description = ""
        self.apps: List[_AppDraft] = []
        self.launches: List[Tuple[LaunchEntry, int]] = []
        self.expects: List[Tuple[ExpectedVerdict, int]] = []
        self._app = None
        self._comp = None
        self._steps = None
        header_seen = False

        for lineno, raw in enumerate(text.splitlines(), start=1):
            try:
                tokens = shlex.split(raw, comments=True)
            except ValueError as e:
                raise ScenarioError(f"cannot tokenize line ({e})", lineno) from None
            if not tokens:
                continue
            if not header_seen:
                self._header(tokens, lineno)
                header_seen = True
                continue
            self._directive(tokens, lineno)

        if not header_seen:
            raise ScenarioError(f"missing '{config.SCENARIO_MAGIC} {config.SCENARIO_VERSION}' header", 1)
        if self.name is None:
            raise ScenarioError("missing 'scenario <name>' line", None, "scenario")
        return self._finish()

    # -----------------------------------------------------------------------------------------

    def _header(self, tokens, lineno):
        if tokens[0] != config.SCENARIO_MAGIC or len(tokens) != 2:
            raise ScenarioError(f"expected header '{config.SCENARIO_MAGIC} {config.SCENARIO_VERSION}'", lineno)
        if tokens[1] != str(config.SCENARIO_VERSION):
            raise ScenarioError(f"unsupported scenario version {tokens[1]}", lineno, "version")

    def _directive(self, tokens, lineno):
        word, args = tokens[0], tokens[1:]
        if word == "scenario":
            self._expect_args(args, 1, lineno, "scenario")
            self.name = self._identifier(args[0], lineno, "scenario")
        elif word == "dataset":
            self._expect_args(args, 1, lineno, "dataset")
            self.dataset = args[0]
        elif word == "description":
            self.description = " ".join(args)
        elif word == "app":
            self._app_line(args, lineno)
        elif word == "component":
            self._component_line(args, lineno)
        elif word == "filter":
            self._filter_line(args, lineno)
        elif word == "on":
            self._on_line(args, lineno)
        elif word == "launch":
            self._launch_line(args, lineno)
        elif word == "expect":
            self._expect_line(args, lineno)
        elif word in STEP_WORDS:
            if self._steps is None:
                raise ScenarioError(f"step '{word}' outside an 'on' block", lineno, word)
            self._steps.append(self._step(STEP_WORDS[word], args, lineno))
        else:
            raise ScenarioError(f"unknown directive '{word}'", lineno, word)

    def _app_line(self, args, lineno):
        if not args:
            raise ScenarioError("app needs a package name", lineno, "app")
        package = self._identifier(args[0], lineno, "package")
        opts = self._options(args[1:], ("pid", "perms"), lineno)
        if "pid" not in opts:
            raise ScenarioError("app needs pid=<int>", lineno, "pid")
        pid = self._int(opts["pid"], lineno, "pid")
        if pid <= 0:
            raise ScenarioError("pid must be positive", lineno, "pid")
        perms = frozenset(p for p in opts.get("perms", "").split(",") if p)
        if any(a.package == package for a in self.apps):
            raise ScenarioError(f"duplicate app '{package}'", lineno, "package")
        if any(a.pid == pid for a in self.apps):
            raise ScenarioError(f"duplicate pid {pid}", lineno, "pid")
        self._app = _AppDraft(package, pid, perms, lineno)
        self.apps.append(self._app)
        self._comp = None
        self._steps = None

    def _component_line(self, args, lineno):
        if self._app is None:
            raise ScenarioError("component outside an app", lineno, "component")
        if len(args) not in (2, 3) or (len(args) == 3 and args[2] != "exported"):
            raise ScenarioError("expected 'component <Name> <kind> [exported]'", lineno, "component")
        name = self._identifier(args[0], lineno, "component")
        try:
            kind = ComponentKind(args[1])
        except ValueError:
            raise ScenarioError(f"unknown component kind '{args[1]}'", lineno, "kind") from None
        if any(c.id.name == name for c in self._app.components):
            raise ScenarioError(f"duplicate component '{name}' in {self._app.package}", lineno, "component")
        self._comp = _ComponentDraft(ComponentId(self._app.package, name), kind, len(args) == 3, lineno)
        self._app.components.append(self._comp)
        self._steps = None

    def _filter_line(self, args, lineno):
        if self._comp is None:
            raise ScenarioError("filter outside a component", lineno, "filter")
        opts = self._options(args, FILTER_KEYS, lineno)

        def _set(key):
            return frozenset(v for v in opts.get(key, "").split(",") if v)

        priority = self._int(opts.get("priority", "0"), lineno, "priority")
        self._comp.filters.append(FilterSpec(_set("actions"), _set("categories"),
                                             _set("schemes"), _set("types"), priority))
        self._steps = None

    def _on_line(self, args, lineno):
        if self._comp is None:
            raise ScenarioError("'on' outside a component", lineno, "on")
        self._expect_args(args, 1, lineno, "on")
        try:
            trigger = Trigger(args[0])
        except ValueError:
            raise ScenarioError(f"unknown trigger '{args[0]}'", lineno, "trigger") from None
        if any(t == trigger for t, _, _ in self._comp.scripts):
            raise ScenarioError(f"duplicate '{trigger.value}' script for {self._comp.id}", lineno, "trigger")
        self._steps = []
        self._comp.scripts.append((trigger, self._steps, lineno))

    def _launch_line(self, args, lineno):
        if not args:
            raise ScenarioError("launch needs a component", lineno, "launch")
        comp = self._component_ref(args[0], lineno, "launch")
        opts = self._options(args[1:], ("chooser",), lineno)
        chooser = self._component_ref(opts["chooser"], lineno, "chooser") if "chooser" in opts else None
        self.launches.append((LaunchEntry(comp, chooser), lineno))
        self._app = self._comp = self._steps = None

    def _expect_line(self, args, lineno):
        if len(args) != 4 or args[1] != ARROW:
            raise ScenarioError("expected 'expect <sender> -> <receiver> <threat>'", lineno, "expect")
        try:
            threat = ThreatType(args[3])
        except ValueError:
            raise ScenarioError(f"unknown threat type '{args[3]}'", lineno, "threat") from None
        verdict = ExpectedVerdict(self._component_ref(args[0], lineno, "sender"),
                                  self._component_ref(args[2], lineno, "receiver"), threat)
        self.expects.append((verdict, lineno))
        self._app = self._comp = self._steps = None

    # -----------------------------------------------------------------------------------------

    def _step(self, kind: StepKind, args, lineno) -> Step:
        if kind is StepKind.ACQUIRE_SOURCE:
            method, into = self._arrow(args, 1, lineno, kind)
            return Step(kind, method=method[0], into=into, line=lineno)
        if kind is StepKind.PUT_EXTRA:
            self._expect_args(args, 2, lineno, kind.value)
            return Step(kind, key=self._identifier(args[0], lineno, "key"),
                        values=(self._value(args[1]),), line=lineno)
        if kind is StepKind.SEND_INTENT:
            return Step(kind, intent=self._template(args, lineno), line=lineno)
        if kind is StepKind.CALL_SINK:
            if not args:
                raise ScenarioError("sink needs a method", lineno, "method")
            return Step(kind, method=args[0], values=tuple(self._value(a) for a in args[1:]), line=lineno)
        if kind is StepKind.STORE_SHARED:
            self._expect_args(args, 3, lineno, kind.value)
            return Step(kind, store=self._identifier(args[0], lineno, "store"),
                        key=self._identifier(args[1], lineno, "key"),
                        values=(self._value(args[2]),), line=lineno)
        if kind is StepKind.LOAD_SHARED:
            (store, key), into = self._arrow(args, 2, lineno, kind)
            return Step(kind, store=self._identifier(store, lineno, "store"),
                        key=self._identifier(key, lineno, "key"), into=into, line=lineno)
        if kind is StepKind.STORE_APPOBJ:
            self._expect_args(args, 2, lineno, kind.value)
            return Step(kind, key=self._identifier(args[0], lineno, "field"),
                        values=(self._value(args[1]),), line=lineno)
        if kind is StepKind.LOAD_APPOBJ:
            (fld,), into = self._arrow(args, 1, lineno, kind)
            return Step(kind, key=self._identifier(fld, lineno, "field"), into=into, line=lineno)
        if kind is StepKind.START_COMPONENT:
            self._expect_args(args, 1, lineno, kind.value)
            return Step(kind, target=self._component_ref(args[0], lineno, "target"), line=lineno)
        if kind is StepKind.GET_EXTRA:
            (key,), into = self._arrow(args, 1, lineno, kind)
            return Step(kind, key=self._identifier(key, lineno, "key"), into=into, line=lineno)
        if kind is StepKind.VALIDATE:
            self._expect_args(args, 2, lineno, kind.value)
            try:
                re.compile(args[1])
            except re.error as e:
                raise ScenarioError(f"bad pattern ({e})", lineno, "pattern") from None
            return Step(kind, key=self._identifier(args[0], lineno, "key"), pattern=args[1], line=lineno)
        raise ScenarioError(f"unsupported step '{kind.value}'", lineno, kind.value)

    def _template(self, args, lineno) -> IntentTemplate:
        if not args or args[0] not in VIAS:
            raise ScenarioError(f"send needs one of {', '.join(VIAS)}", lineno, "via")
        opts = self._options(args[1:], SEND_KEYS, lineno)
        target = self._component_ref(opts["target"], lineno, "target") if "target" in opts else None
        if target is None and "action" not in opts:
            raise ScenarioError("implicit send needs action=", lineno, "action")
        categories = frozenset(c for c in opts.get("categories", "").split(",") if c)
        return IntentTemplate(args[0], target, opts.get("action"), categories,
                              opts.get("type"), opts.get("scheme"))

    def _arrow(self, args, n_before, lineno, kind):
        if len(args) != n_before + 2 or args[n_before] != ARROW:
            raise ScenarioError(f"expected '{kind.value} ... {ARROW} <register>'", lineno, kind.value)
        register = self._identifier(args[-1], lineno, "register")
        if register.startswith("$"):
            raise ScenarioError(f"register '{register}' cannot start with '$'", lineno, "register")
        return args[:n_before], register

    @staticmethod
    def _value(token: str) -> ValueRef:
        # `$$text` is the literal `$text`
        if token.startswith("$$"):
            return ValueRef.lit(token[1:])
        if token.startswith("$"):
            return ValueRef.reg(token[1:])
        return ValueRef.lit(token)

    # -----------------------------------------------------------------------------------------

    def _finish(self) -> Scenario:
        index = {c.id: c for a in self.apps for c in a.components}
        apps = []
        for app in self.apps:
            components = []
            for comp in app.components:
                scripts = []
                for trigger, steps, line in comp.scripts:
                    self._check_script(comp, steps, index)
                    scripts.append(BehaviorScript(trigger, tuple(steps)))
                components.append(ComponentSpec(comp.id, comp.kind, comp.exported,
                                                tuple(comp.filters), tuple(scripts)))
            apps.append(AppSpec(app.package, app.pid, app.permissions, tuple(components)))

        for entry, line in self.launches:
            self._check_ref(entry.component, index, line, "launch")
            if entry.chooser_selection is not None:
                self._check_ref(entry.chooser_selection, index, line, "chooser")
        for verdict, line in self.expects:
            self._check_ref(verdict.sender, index, line, "sender")
            self._check_ref(verdict.receiver, index, line, "receiver")

        return Scenario(self.name, tuple(apps),
                        tuple(e for e, _ in self.launches),
                        tuple(v for v, _ in self.expects),
                        self.dataset, self.description)

    def _check_script(self, comp, steps, index):
        defined = set()
        for step in steps:
            for ref in step.values:
                if ref.register is not None and ref.register not in defined:
                    raise ScenarioError(f"register '${ref.register}' used before assignment", step.line, "register")
            if step.kind is StepKind.ACQUIRE_SOURCE and not self.catalog.is_source(step.method):
                raise ScenarioError(f"unknown source method '{step.method}'", step.line, "method")
            if step.kind is StepKind.CALL_SINK and self.catalog.sink(step.method) is None:
                raise ScenarioError(f"unknown sink method '{step.method}'", step.line, "method")
            if step.target is not None:
                self._check_ref(step.target, index, step.line, "target")
            if step.intent is not None and step.intent.target is not None:
                self._check_ref(step.intent.target, index, step.line, "target")
            if step.into is not None:
                if step.into in defined:
                    raise ScenarioError(f"register '${step.into}' assigned twice", step.line, "register")
                defined.add(step.into)

    @staticmethod
    def _check_ref(cid, index, line, fld):
        if cid not in index:
            raise ScenarioError(f"dangling component reference '{cid}'", line, fld)

    def _component_ref(self, text, lineno, fld) -> ComponentId:
        try:
            cid = ComponentId.parse(text)
        except ValueError as e:
            raise ScenarioError(str(e), lineno, fld) from None
        self._identifier(cid.package, lineno, fld)
        self._identifier(cid.name, lineno, fld)
        return cid

    @staticmethod
    def _identifier(text, lineno, fld) -> str:
        if not IDENTIFIER.match(text):
            raise ScenarioError(f"invalid identifier '{text}'", lineno, fld)
        return text

    @staticmethod
    def _int(text, lineno, fld) -> int:
        try:
            return int(text)
        except ValueError:
            raise ScenarioError(f"expected an integer, got '{text}'", lineno, fld) from None

    @staticmethod
    def _expect_args(args, n, lineno, fld):
        if len(args) != n:
            raise ScenarioError(f"expected {n} argument(s), got {len(args)}", lineno, fld)

    @staticmethod
    def _options(args, allowed, lineno) -> Dict[str, str]:
        opts = {}
        for arg in args:
            key, sep, value = arg.partition("=")
            if not sep:
                raise ScenarioError(f"expected key=value, got '{arg}'", lineno, key)
            if key not in allowed:
                raise ScenarioError(f"unknown option '{key}'", lineno, key)
            opts[key] = value
        return opts


def parse_scenario(text: str, catalog: Optional[MethodCatalog] = None) -> Scenario:
    return ScenarioParser(catalog).parse(text)


def load_scenario(path: str, catalog: Optional[MethodCatalog] = None) -> Scenario:
    with open(path, "r", encoding="utf-8") as f:
        return parse_scenario(f.read(), catalog)


# -----------------------------------------------------------------------------------------

def _join(values) -> str:
    return ",".join(sorted(values))


def _ref(ref: ValueRef) -> str:
    if ref.register is not None:
        return f"${ref.register}"
    if ref.literal.startswith("$"):
        return shlex.quote("$" + ref.literal)
    return shlex.quote(ref.literal)


def _step_line(step: Step) -> str:
    k = step.kind
    if k is StepKind.ACQUIRE_SOURCE:
        return f"acquire {step.method} {ARROW} {step.into}"
    if k is StepKind.PUT_EXTRA:
        return f"put_extra {step.key} {_ref(step.values[0])}"
    if k is StepKind.SEND_INTENT:
        t = step.intent
        parts = ["send", t.via]
        if t.target is not None:
            parts.append(f"target={t.target}")
        if t.action is not None:
            parts.append(f"action={t.action}")
        if t.categories:
            parts.append(f"categories={_join(t.categories)}")
        if t.mime_type is not None:
            parts.append(f"type={t.mime_type}")
        if t.scheme is not None:
            parts.append(f"scheme={t.scheme}")
        return " ".join(shlex.quote(p) for p in parts)
    if k is StepKind.CALL_SINK:
        return " ".join(["sink", step.method] + [_ref(v) for v in step.values])
    if k is StepKind.STORE_SHARED:
        return f"store_shared {step.store} {step.key} {_ref(step.values[0])}"
    if k is StepKind.LOAD_SHARED:
        return f"load_shared {step.store} {step.key} {ARROW} {step.into}"
    if k is StepKind.STORE_APPOBJ:
        return f"store_appobj {step.key} {_ref(step.values[0])}"
    if k is StepKind.LOAD_APPOBJ:
        return f"load_appobj {step.key} {ARROW} {step.into}"
    if k is StepKind.START_COMPONENT:
        return f"start {step.target}"
    if k is StepKind.GET_EXTRA:
        return f"get_extra {step.key} {ARROW} {step.into}"
    return f"validate {step.key} {shlex.quote(step.pattern)}"


def serialize_scenario(scenario: Scenario) -> str:
    """Canonical text form; parse_scenario(serialize_scenario(s)) == s."""
    lines = [f"{config.SCENARIO_MAGIC} {config.SCENARIO_VERSION}",
             f"scenario {scenario.name}",
             f"dataset {shlex.quote(scenario.dataset)}"]
    if scenario.description:
        lines.append(f"description {shlex.quote(scenario.description)}")
    for app in scenario.apps:
        head = f"app {app.package} pid={app.process_id}"
        if app.permissions:
            head += f" perms={_join(app.permissions)}"
        lines.append(head)
        for comp in app.components:
            lines.append(f"  component {comp.id.name} {comp.kind.value}" + (" exported" if comp.exported else ""))
            for flt in comp.filters:
                parts = ["    filter"]
                for key, values in (("actions", flt.actions), ("categories", flt.categories),
                                    ("schemes", flt.data_schemes), ("types", flt.mime_types)):
                    if values:
                        parts.append(shlex.quote(f"{key}={_join(values)}"))
                parts.append(f"priority={flt.priority}")
                lines.append(" ".join(parts))
            for script in comp.scripts:
                lines.append(f"    on {script.trigger.value}")
                lines.extend(f"      {_step_line(step)}" for step in script.steps)
    for entry in scenario.launch_order:
        line = f"launch {entry.component}"
        if entry.chooser_selection is not None:
            line += f" chooser={entry.chooser_selection}"
        lines.append(line)
    for v in scenario.expected_verdicts:
        lines.append(f"expect {v.sender} {ARROW} {v.receiver} {v.threat.value}")
    return "\n".join(lines) + "\n"

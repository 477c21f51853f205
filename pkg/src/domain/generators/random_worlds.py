# random_worlds.py
# ----------------------------------------------------------------
# seeded random worlds: launchers send intents, receivers consume
# extras, some park them in a Shareference entry or an Application
# object field before starting a private component that reads them
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026

from __future__ import annotations

import random
from typing import List, Optional

from src.domain.generators.worlds import WorldGenerator
from src.domain.model import VIAS, ComponentId, ComponentKind, ComponentSpec
from src.scenario.script import Scenario, Step, ValueRef

PERMISSIONS = ["ACCESS_FINE_LOCATION", "READ_PHONE_STATE", "READ_CONTACTS",
               "SEND_SMS", "INTERNET", "WRITE_EXTERNAL_STORAGE"]
SOURCES = ["getLatitude", "getDeviceId", "queryContacts", "getText"]
SINKS = ["Log", "sendTextMessage", "openConnection", "write", "databaseInsert"]
ACTIONS = ["gen.action.ONE", "gen.action.TWO"]
EXTRA_KEYS = ["k0", "k1"]
APPOBJ_FIELD = "data"
SHARED_STORE = "prefs"

MAX_APPS = 4
MAX_COMPONENTS = 3
MAX_INTENTS = 2


class RandomWorldGenerator(WorldGenerator):
    """
    World `n` of seed `s` is fully determined by (s, n). Receivers never send and only
    private partner components load, so every flow stays one hop long.
    """

    def __init__(self, seed: int = 0):
        super().__init__("rnd")
        self.seed = seed

    def generate_world(self, n: int) -> Scenario:
        rng = random.Random(self.seed * 100_003 + n)
        n_apps = rng.randint(2, MAX_APPS)
        packages = [f"com.{self.prefix}{n}.app{i}" for i in range(n_apps)]

        # roles first so explicit targets can point at any receiver
        roles = {}
        for package in packages:
            n_public = rng.randint(1, 2)
            roles[package] = [rng.choice(("launcher", "receiver")) for _ in range(n_public)]
        receivers = [ComponentId(p, f"R{i}") for p, rs in roles.items() for i, r in enumerate(rs) if r == "receiver"]

        apps, launches = [], []
        for idx, package in enumerate(packages):
            perms = [p for p in PERMISSIONS if rng.random() < 0.4]
            components: List[ComponentSpec] = []
            room = MAX_COMPONENTS - len(roles[package])
            for i, role in enumerate(roles[package]):
                if role == "launcher":
                    cid = ComponentId(package, f"L{i}")
                    components.append(self._make_component(
                        cid, ComponentKind.ACTIVITY, True, on_launch=self._launcher_script(rng, receivers)))
                    launches.append(cid)
                else:
                    partner = None
                    if room > 0 and rng.random() < 0.5:
                        partner = ComponentId(package, f"B{i}")
                        room -= 1
                    cid = ComponentId(package, f"R{i}")
                    bypass = rng.choice(("shared", "appobj")) if partner else None
                    components.append(self._make_component(
                        cid, rng.choice(list(ComponentKind)), rng.random() < 0.8,
                        actions=rng.sample(ACTIONS, rng.randint(1, len(ACTIONS))),
                        priority=rng.randint(0, 2),
                        on_receive=self._receiver_script(rng, cid, partner, bypass)))
                    if partner is not None:
                        components.append(self._make_component(
                            partner, ComponentKind.ACTIVITY, False,
                            on_launch=self._partner_script(rng, cid, bypass)))
            apps.append(self._make_app(package, 100 + idx, perms, components))

        rng.shuffle(launches)
        return self._make_scenario(f"random_{self.seed}_{n}", apps, launches)

    # -----------------------------------------------------------------------------------------

    def _launcher_script(self, rng: random.Random, receivers: List[ComponentId]) -> List[Step]:
        steps, registers = [], []
        for j in range(rng.randint(0, 2)):
            steps.append(self.acquire(rng.choice(SOURCES), f"s{j}"))
            registers.append(f"s{j}")
        for _ in range(rng.randint(1, MAX_INTENTS)):
            for key in rng.sample(EXTRA_KEYS, rng.randint(0, len(EXTRA_KEYS))):
                steps.append(self.put_extra(key, self._pick_value(rng, registers)))
            via = rng.choice(VIAS)
            if receivers and rng.random() < 0.4:
                steps.append(self.send(via, target=rng.choice(receivers)))
            else:
                steps.append(self.send(via, action=rng.choice(ACTIONS)))
        if registers and rng.random() < 0.3:
            steps.append(self.sink(rng.choice(SINKS), ValueRef.reg(rng.choice(registers))))
        return steps

    def _receiver_script(self, rng: random.Random, cid: ComponentId,
                         partner: Optional[ComponentId], bypass: Optional[str]) -> List[Step]:
        key = rng.choice(EXTRA_KEYS)
        steps: List[Step] = []
        if rng.random() < 0.2:
            steps.append(self.validate(key, "."))
        steps.append(self.get_extra(key, "x"))
        registers = ["x"]
        if rng.random() < 0.3:
            steps.append(self.acquire(rng.choice(SOURCES), "y"))
            registers.append("y")
        for _ in range(rng.randint(0, 2)):
            args = rng.sample(registers, rng.randint(1, len(registers)))
            steps.append(self.sink(rng.choice(SINKS), *(ValueRef.reg(r) for r in args)))
        if partner is not None:
            if bypass == "shared":
                steps.append(self.store_shared(SHARED_STORE, f"key_{cid.name}", ValueRef.reg("x")))
            else:
                steps.append(self.store_appobj(APPOBJ_FIELD, ValueRef.reg("x")))
            steps.append(self.start(partner))
        return steps

    def _partner_script(self, rng: random.Random, owner: ComponentId, bypass: str) -> List[Step]:
        if bypass == "shared":
            load = self.load_shared(SHARED_STORE, f"key_{owner.name}", "v")
        else:
            load = self.load_appobj(APPOBJ_FIELD, "v")
        return [load, self.sink(rng.choice(SINKS), ValueRef.reg("v"))]

    @staticmethod
    def _pick_value(rng: random.Random, registers: List[str]) -> ValueRef:
        if registers and rng.random() < 0.75:
            return ValueRef.reg(rng.choice(registers))
        return ValueRef.lit(rng.choice(("hello", "42", "plain text")))

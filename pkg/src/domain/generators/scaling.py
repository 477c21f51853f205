# scaling.py
# ----------------------------------------------------------------
# scaling worlds: n independent sender/receiver app pairs, each
# pair exchanging one tainted explicit intent
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026

from __future__ import annotations

from src.domain.generators.worlds import WorldGenerator
from src.domain.model import ComponentId, ComponentKind
from src.scenario.script import Scenario, ValueRef

PAIR_BASE_PID = 1000

# (source, sender permission, sink, receiver permission) cycled over the pairs
PAIR_PATTERNS = [
    ("getDeviceId", "READ_PHONE_STATE", "Log", None),
    ("getLatitude", "ACCESS_FINE_LOCATION", "sendTextMessage", "SEND_SMS"),
    ("queryContacts", "READ_CONTACTS", "openConnection", "INTERNET"),
    ("getText", None, "write", "WRITE_EXTERNAL_STORAGE"),
]


class ScalingWorldGenerator(WorldGenerator):
    def __init__(self):
        super().__init__("scale")

    def generate_world(self, n: int) -> Scenario:
        apps, launches = [], []
        for i in range(n):
            source, send_perm, sink, recv_perm = PAIR_PATTERNS[i % len(PAIR_PATTERNS)]
            sender = ComponentId(f"com.{self.prefix}.sender{i}", "MainActivity")
            receiver = ComponentId(f"com.{self.prefix}.receiver{i}", "HandlerActivity")

            apps.append(self._make_app(sender.package, PAIR_BASE_PID + 2 * i, [p for p in (send_perm,) if p], [
                self._make_component(sender, ComponentKind.ACTIVITY, True, on_launch=[
                    self.acquire(source, "d"),
                    self.put_extra("data", ValueRef.reg("d")),
                    self.send("activity", target=receiver)])]))
            apps.append(self._make_app(receiver.package, PAIR_BASE_PID + 2 * i + 1, [p for p in (recv_perm,) if p], [
                self._make_component(receiver, ComponentKind.ACTIVITY, True, on_receive=[
                    self.get_extra("data", "v"),
                    self.sink(sink, ValueRef.reg("v"))])]))
            launches.append(sender)
        return self._make_scenario(f"scaling_{n}", apps, launches)

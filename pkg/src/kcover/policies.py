"""Online decision-makers behind one sequential interface.

Every policy sees one batch at a time and must accept or reject on the
spot; accepts are irrevocable and capped by the quota.  Threshold policies
accept when the batch's marginal covered length reaches the phase's
threshold; comparison uses >= theta - EPS so exact-boundary cases are not
flipped by float drift.
"""

from __future__ import annotations

import enum
from typing import Optional, Sequence

from . import numeric
from .errors import ConfigError, ProtocolError
from .intervals import Batch, CoverageState, Instance, absorb, added_length, union_length
from .thresholds import soa_an_theta, soa_theta


class Decision(str, enum.Enum):
    ACCEPT = "accept"
    REJECT = "reject"


class Policy:
    """Stateful single-run decision maker; build a fresh one per game."""

    name = "policy"

    def __init__(self, quota: int):
        if quota < 1:
            raise ConfigError(f"quota must be >= 1, got {quota}")
        self.quota = quota
        self.accepted_count = 0
        self.state = CoverageState.empty()
        self._cursor = 0

    def describe(self) -> dict:
        return {"quota": self.quota}

    def next(
        self, item: Batch, position: int, remaining_known: Optional[int] = None
    ) -> Decision:
        """Decide on the item released at `position` (1-based, in order)."""
        if position != self._cursor + 1:
            raise ProtocolError(
                f"decision out of turn: expected position {self._cursor + 1}, "
                f"got {position}"
            )
        self._cursor = position
        accept = self._decide(item, position, remaining_known)
        if accept:
            if self.accepted_count >= self.quota:
                raise ProtocolError("policy tried to accept beyond its quota")
            self.accepted_count += 1
            self.state = absorb(self.state, item)
            return Decision.ACCEPT
        return Decision.REJECT

    def _decide(self, item, position, remaining_known) -> bool:
        raise NotImplementedError


def _default_theta(k, n, setting, m, theta):
    if theta is not None:
        if theta <= 0.0:
            raise ConfigError(f"theta must be positive, got {theta}")
        return float(theta)
    if setting == "AL":
        raise ConfigError(
            "no default threshold exists for arbitrary lengths; pass theta"
        )
    if n is None:
        return soa_an_theta(k, setting, m)
    return soa_theta(k, n, setting, m)


class ThresholdPolicy(Policy):
    """Single threshold with a known release count.

    Always accepts the first item.  Then, in order: stop once the quota is
    used; accept when the remaining quota covers every remaining release;
    otherwise accept exactly when the marginal length reaches theta.
    """

    name = "soa"

    def __init__(self, quota, total, theta=None, setting="UL", m=None):
        super().__init__(quota)
        if total is None:
            raise ConfigError("this policy needs the total release count")
        if not (2 <= quota <= total - 1):
            raise ConfigError(f"need 2 <= k <= n-1, got k={quota} n={total}")
        self.total = total
        self.theta = _default_theta(quota, total, setting, m, theta)

    def describe(self):
        return {"quota": self.quota, "n": self.total, "theta": self.theta}

    def _decide(self, item, position, remaining_known):
        if position == 1:
            return True
        if self.accepted_count >= self.quota:
            return False
        if self.quota - self.accepted_count >= self.total - position + 1:
            return True
        return added_length(self.state, item) >= self.theta - numeric.EPS


class AnytimeThresholdPolicy(Policy):
    """Single threshold without knowing the release count: the same rule
    minus the quota-enough branch."""

    name = "soa-an"

    def __init__(self, quota, theta=None, setting="UL", m=None):
        super().__init__(quota)
        if quota < 2:
            raise ConfigError(f"need k >= 2, got {quota}")
        self.theta = _default_theta(quota, None, setting, m, theta)

    def describe(self):
        return {"quota": self.quota, "theta": self.theta}

    def _decide(self, item, position, remaining_known):
        if position == 1:
            return True
        if self.accepted_count >= self.quota:
            return False
        return added_length(self.state, item) >= self.theta - numeric.EPS


class TwoPhaseThresholdPolicy(Policy):
    """Explore with theta1, exploit with theta2 after `switch_after` accepts.

    theta1 applies while fewer than `switch_after` items are accepted (so to
    accepts 2..switch_after), theta2 afterwards.  With theta1 == theta2 the
    policy is decision-equivalent to :class:`ThresholdPolicy`.
    """

    name = "doa"

    def __init__(self, quota, total, switch_after, theta1, theta2):
        super().__init__(quota)
        if total is None:
            raise ConfigError("this policy needs the total release count")
        if not (2 <= quota <= total - 1):
            raise ConfigError(f"need 2 <= k <= n-1, got k={quota} n={total}")
        if not (1 <= switch_after <= quota):
            raise ConfigError(
                f"need 1 <= switch point <= k, got {switch_after}"
            )
        if not (0.0 < theta1 <= theta2 <= 1.0):
            raise ConfigError(
                f"need 0 < theta1 <= theta2 <= 1, got ({theta1}, {theta2})"
            )
        self.total = total
        self.switch_after = switch_after
        self.theta1 = float(theta1)
        self.theta2 = float(theta2)

    def describe(self):
        return {
            "quota": self.quota,
            "n": self.total,
            "omega": self.switch_after,
            "theta1": self.theta1,
            "theta2": self.theta2,
        }

    def _decide(self, item, position, remaining_known):
        if position == 1:
            return True
        if self.accepted_count >= self.quota:
            return False
        if self.quota - self.accepted_count >= self.total - position + 1:
            return True
        theta = self.theta1 if self.accepted_count < self.switch_after else self.theta2
        return added_length(self.state, item) >= theta - numeric.EPS


class MultiThresholdPolicy(Policy):
    """Non-increasing per-accept thresholds; the i-th accept needs marginal
    length >= thresholds[i].  No unconditional first accept (on unit-length
    input the first item passes any threshold <= 1 anyway)."""

    name = "multi-threshold"

    def __init__(self, thresholds: Sequence[float]):
        thresholds = tuple(float(t) for t in thresholds)
        if not thresholds:
            raise ConfigError("need at least one threshold")
        prev = None
        for i, t in enumerate(thresholds):
            if not (0.0 < t <= 1.0):
                raise ConfigError(f"thresholds[{i}]={t!r} outside (0, 1]")
            if prev is not None and t > prev:
                raise ConfigError("thresholds must be non-increasing")
            prev = t
        super().__init__(len(thresholds))
        self.thresholds = thresholds

    def describe(self):
        return {"quota": self.quota, "thresholds": list(self.thresholds)}

    def _decide(self, item, position, remaining_known):
        if self.accepted_count >= self.quota:
            return False
        theta = self.thresholds[self.accepted_count]
        return added_length(self.state, item) >= theta - numeric.EPS


class AcceptAllPolicy(Policy):
    """Accept everything until the quota runs out."""

    name = "accept-all"

    def _decide(self, item, position, remaining_known):
        return self.accepted_count < self.quota


class RejectUntilForcedPolicy(Policy):
    """Reject until the remaining quota only just covers the remaining
    releases, then accept everything (takes the last k items)."""

    name = "reject-until-forced"

    def __init__(self, quota, total=None):
        super().__init__(quota)
        self.total = total

    def describe(self):
        return {"quota": self.quota, "n": self.total}

    def _decide(self, item, position, remaining_known):
        total = self.total if self.total is not None else remaining_known
        if total is None:
            return False  # never forced when the horizon is unknown
        if self.accepted_count >= self.quota:
            return False
        return self.quota - self.accepted_count >= total - position + 1


def run_policy(
    policy: Policy, inst: Instance
) -> tuple[float, tuple[int, ...], list[Decision]]:
    """Feed a fixed instance to a policy, one item per position.

    Returns (covered length, accepted item indices, full decision trace).
    """
    total = inst.n if inst.setting.count == "UN" else None
    accepted: list[int] = []
    trace: list[Decision] = []
    for pos, item in enumerate(inst.items, start=1):
        d = policy.next(item, pos, total)
        trace.append(d)
        if d is Decision.ACCEPT:
            accepted.append(pos - 1)
            if len(accepted) > inst.quota:
                raise ProtocolError("accepted more items than the quota allows")
    value = union_length([inst.items[i] for i in accepted])
    return value, tuple(accepted), trace

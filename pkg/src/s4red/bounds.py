"""Records of length/size bound checks made while building objects."""

from dataclasses import dataclass

from .errors import BoundViolation


@dataclass(frozen=True)
class BoundCheck:
    name: str
    value: int
    bound: int
    strict: bool = True

    @property
    def ok(self):
        return self.value <= self.bound

    def as_dict(self):
        # bounds can be astronomically large; keep JSON readable
        bound = self.bound if self.bound < 10**18 else f"~10^{len(str(self.bound)) - 1}"
        return {"name": self.name, "value": self.value, "bound": bound,
                "ok": self.ok, "enforced": self.strict}


def check_bound(name, value, bound, strict=True):
    """Return a record of ``value <= bound``; raise if a strict bound fails."""
    rec = BoundCheck(name, int(value), int(bound), strict)
    if strict and not rec.ok:
        raise BoundViolation(f"{name}: {value} > {bound}")
    return rec

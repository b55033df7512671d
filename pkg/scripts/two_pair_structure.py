"""Dense rank of the two-pair generators next to the block structure read off the units."""

import argparse
from dataclasses import dataclass

from walledbrauer.algebra22 import decompose_22, generators
from walledbrauer.oracle import span_rank


@dataclass(frozen=True)
class StructureConfig:
    dims: tuple[int, ...] = (2, 3, 4)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("d", type=int, nargs="*", default=[2, 3, 4])
    cfg = StructureConfig(tuple(parser.parse_args().d))
    print(f"{'d':>3} {'rank':>5} {'blocks':>6}  structure")
    for d in cfg.dims:
        dec = decompose_22(d)
        print(f"{d:>3} {span_rank(generators(d)):>5} {dec.total_dimension:>6}  {dec.signature()}")


if __name__ == "__main__":
    main()

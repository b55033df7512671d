"""Print the single-arc squeezing coefficients for every admissible input at one d."""

import argparse
import json
from dataclasses import dataclass

from walledbrauer.contraction33 import admissible_inputs, reduced_residual, squeeze


@dataclass(frozen=True)
class TableConfig:
    d: int = 3
    dense: bool = True


def rows(cfg: TableConfig):
    for mu, ij, nu, kl in admissible_inputs(cfg.d):
        if cfg.dense:
            yield squeeze(mu, *ij, nu, *kl, cfg.d).to_json()
        else:
            # outer-slot residual only, affordable for larger d
            yield {"input": [mu.to_json(), list(ij), nu.to_json(), list(kl)],
                   "residual": reduced_residual(mu, ij, nu, kl, cfg.d)}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--d", type=int, default=3)
    parser.add_argument("--reduced", action="store_true", help="skip the six-slot operators")
    args = parser.parse_args()
    for row in rows(TableConfig(args.d, not args.reduced)):
        print(json.dumps(row, sort_keys=True))


if __name__ == "__main__":
    main()

"""Deterministic synthetic air-quality data in the UCI file layout.

The real hourly air-quality export is not redistributable with this
package, so this module generates a stand-in with the same shape and
quirks: semicolon delimiters, decimal commas, Date/Time lead columns,
``-200`` missing sentinels (heavy on the NMHC(GT) channel, as in the real
file), trailing empty columns, and a handful of fully-empty rows.

Rows are drawn from three latent pollution regimes (clean air, traffic
dominated, photochemical episode) over a two-component pollution state:
a traffic component driving the combustion channels (CO, NOx, benzene)
and a photochemical component driving the oxidant channels (O3, NO2).
Channels respond with channel-specific gain plus shared disturbance
factors, so the data carries a genuine but overlapping three-cluster
structure with realistically correlated sensors.

Run ``python -m it2fcm.synthetic out.csv`` to write a file.
"""
from __future__ import annotations

import numpy as np

SENSOR_COLUMNS = (
    "CO(GT)", "PT08.S1(CO)", "NMHC(GT)", "C6H6(GT)", "PT08.S2(NMHC)",
    "NOx(GT)", "PT08.S3(NOx)", "NO2(GT)", "PT08.S4(NO2)", "PT08.S5(O3)",
    "T", "RH", "AH",
)

# Channel response:
# value = base + gain_t * traffic + gain_p * photochem
#         + load2 * factor2 + load3 * factor3 + noise_sd * N(0,1)
# where factor2/factor3 are shared latent disturbances (wind mixing,
# cross-sensitivity drift) that correlate the channels the way a real
# co-located sensor array is correlated.
_CHANNELS = {
    "CO(GT)":        (0.6, 2.2, 0.3, 0.1, 0.0, 0.25),
    "PT08.S1(CO)":   (900.0, 420.0, 70.0, 40.0, 10.0, 55.0),
    "NMHC(GT)":      (70.0, 160.0, 60.0, 20.0, 0.0, 30.0),
    "C6H6(GT)":      (4.0, 9.5, 1.5, 0.8, 0.2, 1.1),
    "PT08.S2(NMHC)": (700.0, 360.0, 90.0, 35.0, 10.0, 50.0),
    "NOx(GT)":       (90.0, 260.0, 60.0, 30.0, 8.0, 38.0),
    "PT08.S3(NOx)":  (1100.0, -330.0, -70.0, -30.0, 5.0, 60.0),  # inversely responsive
    "NO2(GT)":       (60.0, 45.0, 60.0, 9.0, 3.0, 11.0),
    "PT08.S4(NO2)":  (1200.0, 160.0, 380.0, 45.0, 12.0, 70.0),
    "PT08.S5(O3)":   (700.0, 110.0, 520.0, 50.0, 15.0, 80.0),
}

# ((traffic mean, photochem mean), sd, mixing weight) per regime.
# The moderate regime dominates, as at a typical urban station; clean and
# episode conditions sit on either side of it along the pollution axis.
_REGIMES = (
    ((0.10, 0.05), 0.16, 0.1925),
    ((0.90, 0.36), 0.22, 0.65),
    ((1.80, 0.72), 0.20, 0.1575),
)

_DECIMALS = {
    "CO(GT)": 1, "C6H6(GT)": 1, "T": 1, "RH": 1, "AH": 4,
    "NMHC(GT)": 0, "NOx(GT)": 0, "NO2(GT)": 0,
}


def generate(n_rows: int = 9357, seed: int = 0, separation: float = 1.0):
    """Sample sensor values; returns (values, regime_labels, column names)."""
    rng = np.random.default_rng(seed)
    weights = np.array([w for _, _, w in _REGIMES])
    regimes = rng.choice(len(_REGIMES), size=n_rows, p=weights / weights.sum())
    mu = np.array([m for m, _, _ in _REGIMES])          # (3, 2)
    sd = np.array([s for _, s, _ in _REGIMES])
    state = (mu[regimes] * separation
             + rng.standard_normal((n_rows, 2)) * sd[regimes, None])
    state = np.clip(state, 0.0, None)
    traffic, photochem = state[:, 0], state[:, 1]
    factor2 = rng.standard_normal(n_rows)
    factor3 = rng.standard_normal(n_rows)

    cols = {}
    for name, (base, gain_t, gain_p, load2, load3, noise) in _CHANNELS.items():
        cols[name] = (base + gain_t * traffic + gain_p * photochem
                      + load2 * factor2 + load3 * factor3
                      + noise * rng.standard_normal(n_rows))
        if name != "PT08.S3(NOx)":
            cols[name] = np.clip(cols[name], 0.05 * abs(base), None)

    # Weather channels: photochemical episodes coincide with warm weather.
    temp = (16.0 - 2.0 * traffic + 5.0 * photochem + 2.5 * factor3
            + 6.0 * rng.standard_normal(n_rows))
    rh = np.clip(
        48.0 + 5.0 * traffic - 7.0 * photochem - 3.0 * factor3
        + 12.0 * rng.standard_normal(n_rows),
        5.0, 95.0,
    )
    cols["T"] = temp
    cols["RH"] = rh
    cols["AH"] = np.clip(
        0.8 + 0.025 * temp + 0.006 * rh + 0.1 * rng.standard_normal(n_rows),
        0.1, None,
    )
    values = np.column_stack([cols[name] for name in SENSOR_COLUMNS])
    return values, regimes, SENSOR_COLUMNS


def _format_cell(value: float, name: str) -> str:
    dec = _DECIMALS.get(name, 0)
    if dec == 0:
        return str(int(round(value)))
    return f"{value:.{dec}f}".replace(".", ",")


def write_uci_layout(path: str, n_rows: int = 9357, seed: int = 0,
                     separation: float = 1.0, missing_rate: float = 0.04,
                     nmhc_missing_rate: float = 0.9,
                     n_empty_rows: int = 100) -> None:
    """Write a synthetic dataset as a UCI-layout semicolon CSV."""
    values, _, names = generate(n_rows, seed, separation)
    rng = np.random.default_rng(seed + 1)
    missing = rng.random(values.shape) < missing_rate
    nmhc = names.index("NMHC(GT)")
    missing[:, nmhc] = rng.random(n_rows) < nmhc_missing_rate

    with open(path, "w", newline="") as fh:
        fh.write("Date;Time;" + ";".join(names) + ";;\n")
        for r in range(n_rows):
            day = r // 24 + 1
            stamp = f"{(day - 1) % 28 + 1:02d}/{(day - 1) // 28 % 12 + 1:02d}/2004"
            cells = [stamp, f"{r % 24}.00.00"]
            for c, name in enumerate(names):
                cells.append("-200" if missing[r, c] else _format_cell(values[r, c], name))
            fh.write(";".join(cells) + ";;\n")
        for _ in range(n_empty_rows):
            fh.write(";" * (len(names) + 3) + "\n")


def main(argv=None):
    import argparse

    parser = argparse.ArgumentParser(
        description="Write a synthetic UCI-layout air-quality CSV."
    )
    parser.add_argument("path")
    parser.add_argument("--rows", type=int, default=9357)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--separation", type=float, default=1.0)
    args = parser.parse_args(argv)
    write_uci_layout(args.path, n_rows=args.rows, seed=args.seed,
                     separation=args.separation)
    print(f"wrote {args.path}")


if __name__ == "__main__":
    main()

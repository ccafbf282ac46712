#!/usr/bin/env python3
# Copyright 2026 The craftddp Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Renders the CSV series written by `craftddp compare` as PNG files."""

import argparse
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

# file stem -> (x column or None, [(y column, label)], y axis label)
PLOTS = {
    "fig06_velocity": [("t_a", [("vx_a", "vx (a)"), ("vy_a", "vy (a)")]),
                       ("t_b", [("vx_b", "vx (b)"), ("vy_b", "vy (b)")]), "m/s"],
    "fig08_deviation": [("t_a", [("deviation_a", "a")]), ("t_b", [("deviation_b", "b")]), "m"],
    "fig09_jerk": [("t_a", [("jerk_a", "a")]), ("t_b", [("jerk_b", "b")]), "m/s^3"],
    "fig10_work_thrust": [(None, [("work_a", "a")]), (None, [("work_b", "b")]), "J per step"],
    "fig11_work_torque": [(None, [("work_a", "a")]), (None, [("work_b", "b")]), "J per step"],
    "fig12_theta": [("t_a", [("theta_a", "a")]), ("t_b", [("theta_b", "b")]), "rad"],
    "fig13_omega": [("t_a", [("omega_a", "a")]), ("t_b", [("omega_b", "b")]), "rad/s"],
}


def plot_series(directory: pathlib.Path, stem: str, layout) -> None:
    *groups, ylabel = layout
    table = pd.read_csv(directory / f"{stem}.csv")
    fig, ax = plt.subplots(figsize=(7, 4))
    for xcol, ys in groups:
        for ycol, label in ys:
            x = table["k"] if xcol is None else table[xcol]
            ax.plot(x, table[ycol], label=label)
    ax.set_xlabel("step" if groups[0][0] is None else "t (s)")
    ax.set_ylabel(ylabel)
    ax.set_title(stem)
    ax.legend()
    fig.tight_layout()
    fig.savefig(directory / f"{stem}.png", dpi=120)
    plt.close(fig)


def plot_paths(directory: pathlib.Path) -> None:
    paths = pd.read_csv(directory / "fig07_paths.csv")
    deck = pd.read_csv(directory / "fig07_deck.csv")
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(paths["x_ref"], paths["y_ref"], "k--", label="reference")
    ax.plot(paths["x_a"], paths["y_a"], label="a")
    ax.plot(paths["x_b"], paths["y_b"], label="b")
    for _, poly in deck.groupby("polyline"):
        ax.plot(poly["x"], poly["y"], color="brown", linewidth=3)
    xs = pd.concat([paths["x_a"], paths["x_b"], paths["x_ref"]]).dropna()
    ys = pd.concat([paths["y_a"], paths["y_b"], paths["y_ref"], deck["y"]]).dropna()
    ax.set_xlim(xs.min() - 2, xs.max() + 2)
    ax.set_ylim(min(ys.min(), 0) - 1, ys.max() + 2)
    ax.set_aspect("equal", adjustable="box")
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(directory / "fig07_paths.png", dpi=120)
    plt.close(fig)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("directory", type=pathlib.Path, help="output directory of `craftddp compare`")
    args = parser.parse_args()
    plot_paths(args.directory)
    for stem, layout in PLOTS.items():
        plot_series(args.directory, stem, layout)


if __name__ == "__main__":
    main()

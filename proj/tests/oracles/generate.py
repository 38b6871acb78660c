#!/usr/bin/env python3
# Copyright 2026 The infosedd Authors
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

"""Independent reference values for the C++ tests.

Computed with mpmath at 40 digits and written to frozen_oracles.hpp. The
C++ code never sees this script; rerun it only to regenerate the header.
"""

import itertools
import pathlib

import mpmath as mp

mp.mp.dps = 40


def geometric_sigma(t, smin=mp.mpf("1e-3"), smax=mp.mpf(20), horizon=mp.mpf(1)):
    b = smax / smin
    return smin * mp.log(b) / horizon * b ** (t / horizon)


def sigma_bar_by_quadrature(t):
    return mp.quad(geometric_sigma, [0, t])


def binary_entropy(p):
    return -(p * mp.log(p) + (1 - p) * mp.log(1 - p))


def mi_2x2(rows):
    px = [sum(r) for r in rows]
    py = [sum(c) for c in zip(*rows)]
    total = mp.mpf(0)
    for i, r in enumerate(rows):
        for j, v in enumerate(r):
            if v > 0:
                total += v * mp.log(v / (px[i] * py[j]))
    return total


def onsager_log_lambda(temp):
    # Inner integral in closed form: int_0^pi ln(a - b cos t) dt
    # = pi ln((a + sqrt(a^2 - b^2)) / 2) for a >= |b|.
    k = 2 / mp.mpf(temp)
    ch2 = mp.cosh(k) ** 2
    sh = mp.sinh(k)

    def outer(theta):
        a = ch2 - sh * mp.cos(theta)
        return mp.pi * mp.log((a + mp.sqrt(a * a - sh * sh)) / 2)

    return mp.log(2) + mp.quad(outer, [0, mp.pi / 2, mp.pi]) / (2 * mp.pi ** 2)


def onsager_entropy(temp):
    free = lambda x: -x * onsager_log_lambda(x)
    return -mp.diff(free, mp.mpf(temp))


def boltzmann_2x2(temp):
    # Periodic 2x2: every site has its two distinct neighbours twice.
    beta = 1 / mp.mpf(temp)
    weights = []
    for spins in itertools.product([-1, 1], repeat=4):
        s = [[spins[0], spins[1]], [spins[2], spins[3]]]
        e = 0
        for r in range(2):
            for c in range(2):
                e += s[r][c] * s[r][(c + 1) % 2] + s[r][c] * s[(r + 1) % 2][c]
        weights.append(mp.e ** (beta * e))
    z = sum(weights)
    return [w / z for w in weights]


LICENSE = """// Copyright 2026 The infosedd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

"""


def main():
    values = {
        "kSigmaBarGeometricAt1": sigma_bar_by_quadrature(1),
        "kSigmaBarGeometricAtHalf": sigma_bar_by_quadrature(mp.mpf("0.5")),
        "kKTermAt2": 2 * (mp.log(2) - 1),
        "kTwoBitKlToUniform": 2 * (mp.log(2) - binary_entropy(mp.mpf("0.9"))),
        "kEightBitEntropy": 8 * binary_entropy(mp.mpf("0.2")),
        "kSkewJointMi": mi_2x2([[mp.mpf("0.5"), mp.mpf("0.25")],
                                [mp.mpf("0.1"), mp.mpf("0.15")]]),
    }
    temps = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 100.0]
    entropies = [onsager_entropy(t) for t in temps]
    log_lambda_2 = onsager_log_lambda(2)
    probs = boltzmann_2x2(mp.mpf("2.5"))

    out = [LICENSE]
    out.append("// Generated by tests/oracles/generate.py. Do not edit.\n")
    out.append("#pragma once\n\nnamespace oracle {\n\n")
    for name, v in values.items():
        out.append(f"inline constexpr double {name} = {mp.nstr(v, 20)};\n")
    out.append(f"inline constexpr double kOnsagerLogLambdaAt2 = {mp.nstr(log_lambda_2, 20)};\n")
    out.append("\ninline constexpr double kOnsagerTemperatures[] = {"
               + ", ".join(str(t) for t in temps) + "};\n")
    out.append("inline constexpr double kOnsagerEntropy[] = {\n")
    for v in entropies:
        out.append(f"    {mp.nstr(v, 20)},\n")
    out.append("};\n\n")
    out.append("// Site 0 is the most significant bit; bit 1 means spin +1.\n")
    out.append("inline constexpr double kBoltzmann2x2At2p5[] = {\n")
    for v in probs:
        out.append(f"    {mp.nstr(v, 20)},\n")
    out.append("};\n\n}  // namespace oracle\n")
    path = pathlib.Path(__file__).with_name("frozen_oracles.hpp")
    path.write_text("".join(out))


if __name__ == "__main__":
    main()

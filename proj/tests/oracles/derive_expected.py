#!/usr/bin/env python3
# Copyright 2026 The sensorlat Authors
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

"""Extended-precision reference values frozen into the C++ unit tests.

Evaluates the closed-form model, controller and linear-analysis expressions
with 50-digit arithmetic, independently of the C++ implementation. Re-run
and paste the output into tests/expected_values.h when a formula changes.
"""

from mpmath import mp, mpf, atan, asin, tan, sqrt, pi, sin, cos, matrix, eig, findroot

mp.dps = 50

L = mpf("2.57")
D = mpf(2)
V = mpf(20)
GMAX = pi / 6
K1 = mpf("-0.8")
K2 = mpf("0.02")
AMAX = mpf(4)


def emit(name, value):
    print(f"inline constexpr double {name} = {mp.nstr(value, 20)};")


def lambdas(k0, k1, k2, l=L, d=D, v=V):
    l1 = sqrt(1 - d**2 * k0**2)
    l2 = 1 + (l**2 - d**2) * k0**2
    l3 = l1 * l2 * k1 * k2 - d * k0**2 * l2 * k1 - l * k0**2
    l4 = v**2 / (l**2 * l1**2) * (2 * l * l3 + l2**2 * k1**2 * (l1 + d * k2) ** 2)
    return l1, l2, l3, l4


def main():
    kmax = mpf("0.004") * pi
    st = mpf(250)
    s = mpf("62.5")
    emit("kCosineKappaAt62_5", kmax / 2 * (1 - cos(2 * pi * s / st)))
    emit("kCosineDKappaAt62_5", kmax * pi / st * sin(2 * pi * s / st))

    g = mpf("0.1")
    emit("kEarthXDot", V)
    emit("kEarthYDot", V * D / L * tan(g))
    emit("kEarthPsiDot", V / L * tan(g))

    g = mpf("0.02")
    emit("kPathEDot", V * D / L * tan(g))
    emit("kPathThetaDot", V / L * tan(g))

    gsat = atan(AMAX * L / V**2)
    emit("kGSatBaseline", gsat)
    emit("kLatAccelAtGSat", V**2 * tan(gsat) / L)
    emit("kMaxSteerV5", atan(AMAX * L / mpf(25)))

    emit("kFeedforwardFullRho200", atan(L * mpf("0.005") / sqrt(1 - (D * mpf("0.005")) ** 2)))
    kap = mpf("0.05")
    emit("kFeedforwardErrorD2", atan(L * kap / sqrt(1 - (2 * kap) ** 2)) - atan(L * kap))
    emit("kFeedforwardErrorD4", atan(L * kap / sqrt(1 - (4 * kap) ** 2)) - atan(L * kap))
    emit("kDesiredYawErrorRho200", -asin(D * mpf("0.005")))

    x = K1 * atan(K2 * -10)
    emit("kFeedbackWrapperInputBaseline", x)
    emit("kFeedbackBaseline", 2 * gsat / pi * atan(pi / (2 * gsat) * x))

    t2 = tan(GMAX) ** 2
    kbar = tan(GMAX) / sqrt(L**2 + D**2 * t2)
    emit("kKappaBar", kbar)
    emit("kLambda1Lower", L / sqrt(L**2 + D**2 * t2))
    emit("kProp1Cond1Threshold", D / L * t2 / sqrt(L**2 + D**2 * t2))

    l1, l2, l3, l4 = lambdas(0, K1, K2)
    a = matrix([[V * D / L * l2 / l1 * K1 * K2, V / l1 * (1 + D / L * l2 * K1)],
                [V / L * (l2 * K1 * K2 - L / l1 * 0), V * l2 / L * K1]])
    emit("kA11", a[0, 0])
    emit("kA12", a[0, 1])
    emit("kA21", a[1, 0])
    emit("kA22", a[1, 1])
    ev, _ = eig(a)
    ev = sorted([e.real for e in ev], reverse=True)
    emit("kEigSlow", ev[0])
    emit("kEigFast", ev[1])

    mmax = D / l1 * abs(L + D * l2 * K1) / sqrt(2 * L * (l3 + abs(l3)) + l2**2 * K1**2 * (l1 + D * K2) ** 2)
    emit("kMMaxBaseline", mmax)
    emit("kOmegaMBaseline", V / l1 * sqrt(abs(l3) / L))

    # Amplification at the cosine-path excitation frequency, used as a
    # sanity anchor for the simulated sway amplitude.
    w = 2 * pi * V / st
    num = V**2 * D**2 / l1**4 * (1 + D / L * l2 * K1) ** 2 * w**2
    den = w**4 + l4 * w**2 + V**4 * l3**2 / (L**2 * l1**4)
    emit("kAmplificationAtCosineFreq", sqrt(num / den))

    # Naive-controller equilibrium on the rho=200 circle: the stationary
    # point of the closed-loop path-frame dynamics with feedforward
    # atan(l kappa) and the wrapped feedback.
    kap = 1 / mpf(200)

    def wrap(x):
        return 2 * gsat / pi * atan(pi / (2 * gsat) * x)

    def naive_eq(e, th, g):
        sdot = V / (1 - e * kap) * (cos(th) - D / L * tan(g) * sin(th))
        return [sin(th) + D / L * tan(g) * cos(th),
                V / L * tan(g) - kap * sdot,
                g - atan(L * kap) - wrap(K1 * (th + atan(K2 * e)))]

    e_n, th_n, g_n = findroot(naive_eq, (mpf("0.5"), mpf("-0.01"), mpf("0.0128")))
    emit("kNaiveCircleSteadyE", e_n)
    emit("kNaiveCircleSteadyTheta", th_n)
    emit("kNaiveCircleSteadyFeedback", g_n - atan(L * kap))


if __name__ == "__main__":
    main()

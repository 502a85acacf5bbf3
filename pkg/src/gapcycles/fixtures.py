"""Published data for gap 82 from the cycle G(37#).

The counts are exact integers. The remaining columns are kept as the printed
strings so regressions can compare against the digits as published.
"""

from __future__ import annotations

from dataclasses import dataclass

from gapcycles.census import DrivingTermCensus


@dataclass(frozen=True)
class Gap82Fixture:
    gap: int
    p0: int
    p1: int
    n2: int
    counts: tuple[int, ...]
    w_p0: tuple[str, ...]
    w_p1: tuple[str, ...]
    w_surrogate: tuple[str, ...]
    l: tuple[str, ...]
    w_p0_sum: str
    w_p1_sum: str
    w_surrogate_sum: str

    @property
    def J(self) -> int:
        return len(self.counts)

    def census(self) -> DrivingTermCensus:
        return DrivingTermCensus(
            self.p0, self.gap, {j: n for j, n in enumerate(self.counts, start=1) if n}
        )

    def columns(self) -> dict[str, tuple[float, ...]]:
        return {
            "w_p0": tuple(map(float, self.w_p0)),
            "w_p1": tuple(map(float, self.w_p1)),
            "w_surrogate": tuple(map(float, self.w_surrogate)),
            "l": tuple(map(float, self.l)),
        }


TABLE_82 = Gap82Fixture(
    gap=82,
    p0=37,
    p1=41,
    n2=217929355875,
    counts=(
        0, 0, 1, 3276, 270422, 8051838, 120058788, 1027245782, 5411112020,
        18234669494, 40031677310, 57338080360, 52822037198, 30369623454,
        10389093440, 1974527214, 192967582, 9665424, 272272,
    ),
    w_p0=(
        "0", "0", "4.5886429E-12", "1.5032394E-08", "1.2408700E-06",
        "3.6947010E-05", "5.5090691E-04", "4.7136641E-03", "2.4829661E-02",
        "8.3672387E-02", "1.8369107E-01", "2.6310398E-01", "2.4238147E-01",
        "1.3935536E-01", "4.7671840E-02", "9.0604004E-03", "8.8545933E-04",
        "4.4351180E-05", "1.2493590E-06",
    ),
    w_p1=(
        "0", "2.353150E-13", "1.160809E-09", "1.415302E-07", "5.882215E-06",
        "1.179125E-04", "1.326320E-03", "9.081749E-03", "3.968207E-02",
        "1.136091E-01", "2.155096E-01", "2.702203E-01", "2.204693E-01",
        "1.135898E-01", "3.526600E-02", "6.171214E-03", "5.642306E-04",
        "2.673245E-05", "7.047666E-07",
    ),
    w_surrogate=(
        "-2.768491E-13", "1.976531E-12", "-3.035074E-12", "1.503443E-08",
        "1.244637E-06", "3.716878E-05", "5.558081E-04", "4.769260E-03",
        "2.519649E-02", "8.516773E-02", "1.875723E-01", "2.695709E-01",
        "2.492174E-01", "1.438024E-01", "4.936702E-02", "9.413221E-03",
        "9.225035E-04", "4.631847E-05", "1.308852E-06",
    ),
    l=(
        "1.025641", "11.553942", "60.410483", "194.488465", "431.258857",
        "697.937481", "852.214506", "800.382107", "584.027075", "332.122850",
        "146.758457", "49.939794", "12.883935", "2.461383", "0.336767",
        "0.031541", "0.001910", "0.000070", "0.000001",
    ),
    w_p0_sum="1.000000",
    w_p1_sum="1.025641",
    w_surrogate_sum="1.025641",
)

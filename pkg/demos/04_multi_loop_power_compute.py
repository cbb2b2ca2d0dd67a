"""Joint power + compute allocation across five robots.

Sweeps the downlink power budget, comparing the task-oriented joint scheme
against max-throughput and compute-only baselines, then shows where the
task-oriented optimizer actually puts the watts at a 5 W budget.
"""
from pathlib import Path

import numpy as np

from satloop import MultiLoopScheme, default_scenario, solve_multi_loop
from satloop import svgplot

OUT = Path(__file__).resolve().parent / "output"
OUT.mkdir(exist_ok=True)

scn = default_scenario()
elevations = scn.robot_elevations()
print("robot elevations (deg, best to worst):",
      [f"{e:.1f}" for e in elevations])
print()

powers = np.linspace(1.0, 40.0, 9)
series = {"task_oriented": [], "max_throughput": [], "compute_only": []}
for p_tot in powers:
    baselines = []
    mt = solve_multi_loop(scn.multi_loop_problem(
        MultiLoopScheme.MAX_THROUGHPUT_JOINT, total_power_w=p_tot), seed=scn.seed)
    co = solve_multi_loop(scn.multi_loop_problem(
        MultiLoopScheme.COMPUTE_ONLY_EQUAL_COMM, total_power_w=p_tot), seed=scn.seed)
    task = solve_multi_loop(scn.multi_loop_problem(
        MultiLoopScheme.TASK_ORIENTED_JOINT, total_power_w=p_tot),
        seed=scn.seed, extra_starts=[mt.decision, co.decision])
    series["task_oriented"].append(task.lqr_total)
    series["max_throughput"].append(mt.lqr_total)
    series["compute_only"].append(co.lqr_total)
    print(f"P={p_tot:5.1f} W  task={task.lqr_total:.5f}  "
          f"maxT={mt.lqr_total:.5f}  compOnly={co.lqr_total:.5f}")

print()
print("the gap is widest at low power and shrinks as every robot's")
print("command stream saturates.")

svg = svgplot.line_chart(list(powers),
                         [(k, v) for k, v in series.items()],
                         "Total closed-loop cost vs power budget",
                         "total power (W)", "total LQR cost")
(OUT / "multi_loop_sweep.svg").write_text(svg)

# allocation detail at 5 W
mt = solve_multi_loop(scn.multi_loop_problem(
    MultiLoopScheme.MAX_THROUGHPUT_JOINT, total_power_w=5.0), seed=scn.seed)
task = solve_multi_loop(scn.multi_loop_problem(
    MultiLoopScheme.TASK_ORIENTED_JOINT, total_power_w=5.0),
    seed=scn.seed, extra_starts=[mt.decision])
print()
print(f"{'robot':>5} {'elev':>6} {'P task':>8} {'P maxT':>8} {'f task GC/s':>12}")
for i, elev in enumerate(elevations):
    print(f"{i + 1:5d} {elev:6.1f} {task.decision['power_w'][i]:8.3f} "
          f"{mt.decision['power_w'][i]:8.3f} "
          f"{task.decision['compute_cps'][i] / 1e9:12.2f}")
print()
print("the worst-channel robot needs disproportionate power (and compute)")
print("to keep its command stream above the stability threshold.")

groups = [f"robot {i + 1}" for i in range(len(elevations))]
svg2 = svgplot.grouped_bar_chart(
    groups,
    [("task_oriented", list(task.decision["power_w"])),
     ("max_throughput", list(mt.decision["power_w"]))],
    "Per-robot power at 5 W total", "power (W)")
(OUT / "multi_loop_allocation.svg").write_text(svg2)
print(f"wrote {OUT / 'multi_loop_sweep.svg'} and multi_loop_allocation.svg")

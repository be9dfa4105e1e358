"""Every analytics procedure, run over the synthetic reference dataset.

The dataset is a test asset engineered so each published aggregate lands
on target; it is not field data.
"""

from crowdkiosk import (
    build_reference_dataset,
    composition,
    leaderboard_cohort_compare,
    likert_aggregate,
    mann_whitney_u,
    normalized_return,
    normalized_return_batch,
    play_fraction,
    task_time_ratio,
    tutorial_vs_task_quality,
    usage_stats,
    default_scenes,
)

ds = build_reference_dataset()
print(f"dataset: {len(ds.episodes)} episodes, {len(ds.users)} users, "
      f"{len(ds.leaderboard_visits)} leaderboard visitors")

rep = composition(ds)
print(f"composition: task {rep.percent('task'):.1f}%  "
      f"tutorial {rep.percent('tutorial'):.1f}%  play {rep.percent('play'):.1f}%")

print(f"scene A ratio (hi_chew : tootsie_roll)      = {task_time_ratio(ds, 'hi_chew', 'tootsie_roll'):.2f}")
print(f"scene B ratio (jelly_bean : hershey_kiss)   = {task_time_ratio(ds, 'jelly_bean', 'hershey_kiss'):.2f}")
print(f"scene C ratio (ziploc : bin)                = {task_time_ratio(ds, 'hi_chew_ziploc', 'hi_chew_bin'):.2f}")
print(f"free-play fraction: scene A {play_fraction(ds, 'A'):.3f}, scene B {play_fraction(ds, 'B'):.3f}")

usage = usage_stats(ds)
print(f"episodes by scene: {usage['episodes_by_scene']}")
peak = max(usage["episodes_by_hour"], key=usage["episodes_by_hour"].get)
print(f"busiest hour: {peak}:00 with {usage['episodes_by_hour'][peak]} episodes")

cc = leaderboard_cohort_compare(ds)
print(f"leaderboard visitors vs others:")
print(f"  quantity: U={cc.quantity.U:.0f}  p={cc.quantity.p_two_sided:.2e}  "
      f"means {cc.quantity_means[0]:.2f} vs {cc.quantity_means[1]:.2f}")
print(f"  quality:  U={cc.quality.U:.0f}  p={cc.quality.p_two_sided:.2e}  "
      f"means {cc.quality_means[0]:.2f} vs {cc.quality_means[1]:.2f}")

agg = likert_aggregate(ds)
print("histogram of per-user minimum ratings (1..5):")
for q in ("intuitive", "interesting", "wanted"):
    print(f"  {q:<12} {[agg['histograms'][q][r] for r in range(1, 6)]}")

rows = tutorial_vs_task_quality(ds)
by_score = {}
for _, score, quality in rows:
    by_score.setdefault(score, []).append(quality)
print("mean task quality by tutorial score:")
for score in sorted(by_score):
    qs = by_score[score]
    print(f"  tutorial {score}: n={len(qs):<3} mean task quality {sum(qs) / len(qs):.2f}")

# the rank test itself, on a small example with an exact p
r = mann_whitney_u([1.2, 3.4, 2.2], [5.1, 6.0, 7.3])
print(f"mann_whitney_u([..3 low..], [..3 high..]): U={r.U}, p={r.p_two_sided} ({r.method.value})")

# checklist scoring for the long-horizon tasks
checklist = default_scenes()["C"].task("hi_chew_ziploc")
print(f"normalized return, 3 of 7 subtasks: {normalized_return([1, 1, 1, 0, 0, 0, 0], checklist):.3f}")
mean, std = normalized_return_batch(
    [[1] * 7, [1, 1, 1, 1, 0, 0, 0], [1, 1, 0, 0, 0, 0, 0]], checklist
)
print(f"batch over 3 trials: {mean:.1f} +/- {std:.1f}")

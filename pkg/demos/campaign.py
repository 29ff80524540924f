"""Run a seeded verification campaign and write the JSON report."""
import sys
import time

from walkbound.campaign import run_campaign
from walkbound.generate import CampaignConfig
from walkbound.report import emit_report


def main(out=None):
    config = CampaignConfig(count=100, n_max=10, seed=11)
    t0 = time.perf_counter()
    report = run_campaign(config)
    dt = time.perf_counter() - t0
    s = report.summary()
    print(f"{s['instances']} instances, {s['records']} bound records, {s['violations']} violations, "
          f"{s['checks']} cross-checks ({s['failed_checks']} failed) in {dt:.1f} s")
    print(f"smallest slack {s['min_slack']}, sharp instances {s['sharp_instances']} (unit paths: {s['unit_paths']})")
    if out:
        with open(out, "w") as fh:
            fh.write(emit_report(report, "json"))
        print("report written to", out)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else None)

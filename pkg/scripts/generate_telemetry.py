import json
import logging
import os
import sys
from dataclasses import replace

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from simulation.generator import generate
from simulation.policy import default_generator_config
from telemetry.features import pearson
from telemetry.loader import write_csv
from telemetry.models import ARRIVAL_RATE_CL, CLIENT_FRAME_SIZE


def generate_telemetry(filename="sampledata/telemetry.csv", seed=0):
    config = replace(default_generator_config(), seed=seed)

    samples, truth = generate(config)
    path = write_csv(samples, filename)

    truth_path = os.path.splitext(filename)[0] + ".ground_truth.json"
    with open(truth_path, "w", encoding="utf-8") as file:
        json.dump(truth.to_dict(), file, indent=2, sort_keys=True)

    delays = samples.column("Delay")
    rho = pearson(samples.column(CLIENT_FRAME_SIZE), samples.column(ARRIVAL_RATE_CL))
    print(f"Generated {len(samples)} samples into '{path}' (ground truth: '{truth_path}').")
    print(f"  hidden model: {config.hidden.value}, noise sigma {truth.noise_sigma * 1e3:.3f} ms")
    print(f"  delay: mean {delays.mean() * 1e3:.2f} ms, max {delays.max() * 1e3:.2f} ms")
    print(f"  pearson(frame size, client rate) = {rho:.4f}")


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    generate_telemetry()

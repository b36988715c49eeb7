"""
Complete Leaf-Fall Workflow

End-to-end workflow that:
1. Generates a synthetic site when no phenology file exists
2. Ingests phenology, positions, weather and rasters
3. Builds the scaled, windowed dataset
4. Trains the LSTM classifier
5. Evaluates it and writes the reports
"""

import sys
from pathlib import Path
from typing import List, Optional

from leafcast.adapters.json_adapter import load_config_file
from leafcast.cli import main as leafcast_main


class LeafcastWorkflow:
    """
    Runs the subcommands in order, stopping at the first failure.

    Args:
        config_file: Optional JSON config passed to every step
        seed: Optional seed passed to every step
    """

    def __init__(self, config_file: Optional[str] = None, seed: Optional[int] = None):
        self.common: List[str] = []
        if config_file:
            self.common += ["--config", config_file]
        if seed is not None:
            self.common += ["--seed", str(seed)]
        self.config = load_config_file(config_file)

    def run_step(self, step_name: str, command: str) -> bool:
        print("=" * 80)
        print(f"STEP: {step_name}")
        print("=" * 80)

        code = leafcast_main(self.common + [command])
        if code != 0:
            print(f"\n[ERROR] {step_name} failed with exit code {code}\n")
            return False
        print(f"\n[SUCCESS] {step_name} completed successfully\n")
        return True

    def run(self) -> bool:
        steps = [
            ("Ingest Sources", "ingest"),
            ("Build Dataset", "build-dataset"),
            ("Train Model", "train"),
            ("Evaluate Model", "evaluate"),
        ]
        if not Path(self.config.paths.pheno).is_file():
            print(f"[ATTENTION] {self.config.paths.pheno} not found, generating a synthetic site")
            steps.insert(0, ("Generate Synthetic Site", "synth"))

        for step_name, command in steps:
            if not self.run_step(step_name, command):
                print("Workflow stopped")
                return False

        out = Path(self.config.paths.output_dir)
        print("\n" + "=" * 80)
        print("[SUCCESS] WORKFLOW COMPLETED SUCCESSFULLY")
        print("=" * 80)
        print("\nGenerated Files:")
        print(f"  1. Checkpoint: {out / 'model.ckpt'}")
        print(f"  2. RMSE: {out / 'rmse.csv'}")
        print(f"  3. Evaluation Report: {out / 'evaluation_report.xlsx'}")
        print("=" * 80 + "\n")
        return True


def main():
    """Main entry point: run_leafcast.py [config.json] [seed]"""
    if len(sys.argv) > 1 and sys.argv[1] in ['-h', '--help', 'help']:
        print(__doc__)
        print("USAGE:\n  python run_leafcast.py [config.json] [seed]\n")
        sys.exit(0)

    config_file = sys.argv[1] if len(sys.argv) > 1 else None
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else None
    success = LeafcastWorkflow(config_file, seed).run()
    sys.exit(0 if success else 1)


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""
Setup Script for the Fuzzy ID3 Toolkit
Checks the environment, installs dependencies and runs the test suite.
"""

import importlib
import subprocess
import sys
from pathlib import Path

import yaml

PROJECT_ROOT = Path(__file__).resolve().parent
REQUIRED_MODULES = ["numpy", "yaml", "dotenv", "rich", "pytest", "hypothesis"]


def check_requirements():
    """Check system requirements"""
    print("🔍 Checking system requirements...")

    if sys.version_info < (3, 9):
        print("❌ Python 3.9+ required")
        return False

    print(f"✅ Python {sys.version_info.major}.{sys.version_info.minor}")
    return True


def install_dependencies():
    """Install Python dependencies"""
    print("📦 Installing Python dependencies...")

    missing = []
    for module in REQUIRED_MODULES:
        try:
            importlib.import_module(module)
        except ImportError:
            missing.append(module)

    if not missing:
        print("✅ Dependencies already installed")
        return True

    print(f"   Missing: {', '.join(missing)}")
    try:
        subprocess.run([
            sys.executable, "-m", "pip", "install", "-r", str(PROJECT_ROOT / "requirements.txt")
        ], check=True)
        print("✅ Dependencies installed")
        return True
    except subprocess.CalledProcessError:
        print("❌ Failed to install dependencies")
        return False


def check_configuration():
    """Validate the toolkit configuration"""
    print("⚙️  Checking configuration...")

    config_path = PROJECT_ROOT / "config" / "toolkit_config.yaml"
    if not config_path.exists():
        print(f"❌ Configuration not found: {config_path}")
        return False

    with open(config_path, 'r', encoding='utf-8') as f:
        config = yaml.safe_load(f) or {}

    if not isinstance(config, dict):
        print("❌ Configuration must be a YAML mapping")
        return False

    if int(config.get("k", 2)) < 2:
        print("❌ k must be ≥ 2")
        return False

    print("✅ Configuration valid")
    return True


def check_data():
    """Check the bundled Iris data file"""
    print("🌸 Checking Iris data...")

    data_path = PROJECT_ROOT / "data" / "iris.csv"
    if not data_path.exists():
        print(f"❌ Data file not found: {data_path}")
        return False

    with open(data_path, 'r', encoding='utf-8') as f:
        rows = [line for line in f.read().splitlines()[1:] if line.strip()]

    if len(rows) != 150:
        print(f"❌ Expected 150 rows, found {len(rows)}")
        return False

    print("✅ Iris data present (150 rows)")
    return True


def run_tests():
    """Run toolkit tests"""
    print("🧪 Running toolkit tests...")

    try:
        result = subprocess.run([
            sys.executable, "-m", "pytest", "-q"
        ], cwd=PROJECT_ROOT, capture_output=True, text=True)

        if result.returncode == 0:
            print("✅ All tests passed")
            return True
        else:
            print("❌ Some tests failed")
            print(result.stdout)
            print(result.stderr)
            return False
    except Exception as e:
        print(f"❌ Error running tests: {e}")
        return False


def main():
    """Main setup process"""
    print("🌳 Fuzzy ID3 Toolkit Setup")
    print("=" * 50)

    steps = [
        ("System Requirements", check_requirements),
        ("Dependencies", install_dependencies),
        ("Configuration", check_configuration),
        ("Iris Data", check_data),
        ("Toolkit Tests", run_tests),
    ]

    failed_steps = []

    for step_name, step_func in steps:
        print(f"\n🔄 {step_name}...")
        try:
            if not step_func():
                failed_steps.append(step_name)
        except Exception as e:
            print(f"❌ Error in {step_name}: {e}")
            failed_steps.append(step_name)

    print(f"\n{'='*50}")
    print("🎯 SETUP SUMMARY")
    print(f"{'='*50}")

    if failed_steps:
        print("❌ Setup completed with issues:")
        for step in failed_steps:
            print(f"  - {step}")
        print("\nPlease resolve these issues before running experiments.")
    else:
        print("✅ Setup completed successfully!")
        print("\n🚀 Next steps:")
        print("1. Compare both trees: python3 tools/cli.py compare --data data/iris.csv --pair all-pairs")
        print("2. Inspect a tree: python3 tools/cli.py train --data data/iris.csv --method fuzzy --pair 2,3 --format table")
        print("3. Command reference: COMMANDS.md")

    return len(failed_steps) == 0


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)

#!/usr/bin/env python3
"""
Setup script for dskp-lab

This script installs the requirements and checks that the installation works.
"""

import os
import sys
import subprocess
from pathlib import Path

sys.path.append(str(Path(__file__).parent / 'src'))


def install_requirements():
    """Install required packages"""
    print("Installing required packages...")
    try:
        subprocess.check_call([sys.executable, "-m", "pip", "install", "-r", "requirements.txt"])
        print("✓ Requirements installed successfully")
        return True
    except subprocess.CalledProcessError as e:
        print(f"✗ Failed to install requirements: {e}")
        return False


def test_imports():
    """Test if all required modules can be imported"""
    print("Testing imports...")

    for module, label in (('numpy', 'numpy'), ('pandas', 'pandas'), ('PIL', 'Pillow'), ('networkx', 'networkx')):
        try:
            __import__(module)
            print(f"✓ {label} imported successfully")
        except ImportError as e:
            print(f"✗ Failed to import {label}: {e}")
            return False
    return True


def create_directories():
    """Create the artifact directory"""
    print("Creating directories...")
    output_dir = Path(os.getenv('DSKP_OUTPUT_DIR', 'output'))
    output_dir.mkdir(exist_ok=True)
    print(f"✓ Created directory: {output_dir}")


def smoke_test():
    """Evaluate one value three ways and check they agree"""
    print("Running a smoke computation...")
    try:
        from dskp import random_initial_data, value_at
        from dimer import explicit_value

        window = range(-4, 6)
        init = random_initial_data(window, window, seed=1)
        target = (0, 0, 2)
        values = [value_at(init, *target), explicit_value(init, target, 'ratio'),
                  explicit_value(init, target, 'kernel')]
        if values[0] == values[1] == values[2]:
            print(f"✓ dSKP, dimers and kernel agree: x(0,0,2) = {values[0].format()}")
            return True
        print(f"✗ Values disagree: {[v.format() for v in values]}")
        return False
    except Exception as e:
        print(f"✗ Smoke computation failed: {e}")
        return False


def main():
    """Main setup function"""
    print("=" * 50)
    print("dskp-lab Setup")
    print("=" * 50)

    success = install_requirements()
    print()

    if not test_imports():
        success = False
    print()

    create_directories()
    print()

    if success and not smoke_test():
        success = False

    print()
    print("=" * 50)
    if success:
        print("✓ Setup completed successfully!")
        print("\nYou can now run:")
        print("  python dskp_lab.py run scenarios/pnet_m3_sing.json")
        print("  python dskp_lab.py selftest")
    else:
        print("✗ Setup failed")
        print("Please fix the errors above and run setup again")
    print("=" * 50)


def package_setup():
    """Packaging metadata, used when pip or setuptools invoke this script"""
    from setuptools import setup

    modules = sorted(path.stem for path in (Path(__file__).parent / 'src').glob('*.py')
                     if not path.stem.startswith('test_'))
    setup(
        name='dskp-lab',
        version='0.1.0',
        package_dir={'': 'src'},
        py_modules=modules,
        install_requires=['numpy>=1.21.0', 'pandas>=1.5.0', 'Pillow>=10.0.0', 'networkx>=3.0'],
        python_requires='>=3.8',
    )


if __name__ == "__main__":
    if len(sys.argv) > 1:
        package_setup()
    else:
        main()

#!/usr/bin/env python3
"""
Dependency verification script for cuspidal-torsion.

This script checks that all required dependencies are properly installed
and working in the current environment.
"""

import sys
import importlib


def check_python_package(package_name, import_name=None, required=True):
    """Check if a Python package is available."""
    if import_name is None:
        import_name = package_name

    try:
        module = importlib.import_module(import_name)
        version = getattr(module, "__version__", "unknown version")
        print(f"✅ {package_name}: {version}")
        return True
    except ImportError:
        marker = "❌" if required else "⚠️ "
        print(f"{marker} {package_name}: Not available")
        return not required


def check_exact_arithmetic():
    """Smoke test: the prime-level torsion of J_0(11) has order 5."""
    try:
        from cuspidal_torsion.base_ring import Modulus
        from cuspidal_torsion.torsion import prime_level_torsion_order

        order = prime_level_torsion_order(Modulus.nf(11))
    except Exception as e:
        print(f"❌ cuspidal_torsion: {e}")
        return False
    if order != 5:
        print(f"❌ cuspidal_torsion: J_0(11) torsion order {order}, expected 5")
        return False
    print("✅ cuspidal_torsion: J_0(11) torsion order 5")
    return True


def main():
    """Run all dependency checks."""
    print("🔍 cuspidal-torsion Dependency Check")
    print("=" * 40)

    all_good = True

    print("\n📦 Python Packages:")
    all_good &= check_python_package("sympy")
    all_good &= check_python_package("numpy")
    all_good &= check_python_package("galois")
    all_good &= check_python_package("pytest")
    all_good &= check_python_package("sphinx", required=False)
    all_good &= check_python_package("sphinx_rtd_theme", required=False)

    print("\n🧮 Package:")
    all_good &= check_exact_arithmetic()

    print("\n" + "=" * 40)
    if all_good:
        print("🎉 All dependencies are available!")
        print("✅ cuspidal-torsion is ready to use.")
        sys.exit(0)
    else:
        print("⚠️  Some dependencies are missing.")
        print("❌ Please install missing dependencies with: pip install -e .[test]")
        sys.exit(1)


if __name__ == "__main__":
    main()

"""
Main entry point for the Operator Space Toolkit
Quick start script
"""

from opspace_toolkit import OpSpaceToolkit
from opspace_toolkit.testing.suites import FIXTURE_DIR


def main():
    """Main function"""
    print("=" * 60)
    print("Operator Space Toolkit")
    print("Version 1.0.0")
    print("=" * 60)
    print()

    try:
        print("Initializing toolkit...")
        toolkit = OpSpaceToolkit()
        print("✓ Toolkit initialized successfully")
        print()

        print("Toolkit Status:")
        print("-" * 40)
        health = toolkit.get_health_status()
        for key in ("status", "version", "seed", "budgets", "tolerances"):
            print(f"  {key}: {health[key]}")
        print()

        print("Norms of the identity grid:")
        print("-" * 40)
        element = str(FIXTURE_DIR / "identity_element.json")
        for space in ("m2_space.json", "t2_space.json"):
            report = toolkit.norm(str(FIXTURE_DIR / space), element)
            print(f"  {space}: [{report.lo:.10g}, {report.hi:.10g}] ({report.status})")
        print()

        print("Verification Suites:")
        print("-" * 40)
        for i, suite in enumerate(toolkit.list_suites(), 1):
            print(f"  {i}. {suite}")
        print()

        result = toolkit.verify("equaliser")
        print(result.summary())

        print("=" * 60)
        print("Toolkit ready! Run 'opspace --help' for the command line.")
        print("=" * 60)

    except Exception as e:
        print(f"Error: {str(e)}")
        import traceback
        traceback.print_exc()


if __name__ == "__main__":
    main()

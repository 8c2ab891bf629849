import sys


def main() -> None:
    from core.magkon_main import main as run
    sys.exit(run())


if __name__ == "__main__":
    main()

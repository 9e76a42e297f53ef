"""Regenerate the shipped model files from ``bellcheck.catalog``."""

from pathlib import Path

from bellcheck.catalog import NAMED
from bellcheck.modelfile import dumps

OUT = Path(__file__).resolve().parents[1] / "src" / "bellcheck" / "models"


def main():
    OUT.mkdir(exist_ok=True)
    for name, build in NAMED.items():
        path = OUT / f"{name}.toml"
        path.write_text(dumps(build()), encoding="utf-8")
        print(f"wrote {path.relative_to(OUT.parents[2])}")


if __name__ == "__main__":
    main()

"""Regenerate docs/api.yaml from the FastAPI app. Run from the repo root."""

from pathlib import Path

import yaml

from hitailor.service.app import create_app


def main() -> None:
    app = create_app()
    doc = app.openapi()
    doc["info"]["description"] = (
        "Authoring loop for hierarchical tables: upload, transform, select, "
        "recommend, visualize, export. Error bodies carry a stable machine-readable "
        "`code` mirroring the engine's error names."
    )
    out = Path(__file__).resolve().parent.parent / "docs" / "api.yaml"
    out.write_text(yaml.safe_dump(doc, sort_keys=False, allow_unicode=True),
                   encoding="utf-8")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()

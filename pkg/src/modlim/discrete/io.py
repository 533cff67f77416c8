import csv
from pathlib import Path
from typing import Union

from modlim.models.discrete import DiscreteDomain, ModulusEstimate


def write_density_csv(
    g: DiscreteDomain, estimate: ModulusEstimate, path: Union[str, Path]
) -> Path:
    """x,y,rho for every grid node."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y", "rho"])
        for x, y, rho in zip(g.x, g.y, estimate.density):
            writer.writerow([f"{x:.12g}", f"{y:.12g}", f"{rho:.12g}"])
    return path


def write_certificate(estimate: ModulusEstimate, path: Union[str, Path]) -> Path:
    """One active path per line as space-separated node indices."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for nodes in estimate.active_paths:
            fh.write(" ".join(str(v) for v in nodes) + "\n")
    return path

from dataclasses import dataclass, field
from pathlib import Path
from typing import List

from scatpoles.cli.output import pole_table, write_csv, write_json, write_text
from scatpoles.config.models import (
    HankelZeroRecord,
    HankelZeroRecordSchema,
    PoleRecord,
    PoleRecordSchema,
)
from scatpoles.scatpoles import ScatteringPoles


@dataclass
class CommandResult:
    outputs: List[Path] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)


def cmd_scan(poles: ScatteringPoles, output_dir: Path) -> CommandResult:
    result = CommandResult()
    fields = {flavor: poles.scan(flavor) for flavor in poles.config.flavors()}
    for flavor, indicator in fields.items():
        if indicator.failures:
            result.notes.append(f"{flavor}: {len(indicator.failures)} grid points failed")
        path = output_dir / f"scan_{flavor}.csv"
        result.outputs.append(write_csv(path, ["kappa_re", "kappa_im", "log10_rim"], indicator.to_rows()))
    return result


def cmd_poles(poles: ScatteringPoles, output_dir: Path) -> CommandResult:
    search = poles.find_poles()
    result = CommandResult(notes=list(search.notes))
    records = [
        PoleRecord(
            kappa_re=p.kappa.real,
            kappa_im=p.kappa.imag,
            residual=p.residual,
            count=p.count,
            flavor=flavor,
            n=p.n,
            seed=poles.config.seed,
        )
        for flavor, estimates in search.poles.items()
        for p in estimates
    ]
    rows = PoleRecordSchema(many=True).dump(records)
    result.notes.append(f"{len(search.candidates)} candidates")
    result.outputs.append(write_json(output_dir / "poles.json", rows))
    result.outputs.append(write_text(output_dir / "poles.txt", pole_table(rows)))
    return result


def cmd_convergence(poles: ScatteringPoles, output_dir: Path) -> CommandResult:
    rows = poles.convergence()
    flavors = ["single", "double"]
    table = [
        [row.target.real, row.target.imag, row.n] + [row.errors.get(flavor) for flavor in flavors] for row in rows
    ]
    path = output_dir / "convergence.csv"
    header = ["target_re", "target_im", "n", "ae_single", "ae_double"]
    return CommandResult(outputs=[write_csv(path, header, table)])


def cmd_disk_oracle(poles: ScatteringPoles, output_dir: Path) -> CommandResult:
    report = poles.disk_oracle()
    records = [
        HankelZeroRecord(order=z.order, kappa_re=z.kappa.real, kappa_im=z.kappa.imag, newton_residual=z.newton_residual)
        for z in report.zeros
    ]
    path = write_json(output_dir / "hankel_zeros.json", HankelZeroRecordSchema(many=True).dump(records))
    notes = [f"nu={nu}: {count} zeros" for nu, count in report.contour_counts.items() if count]
    return CommandResult(outputs=[path], notes=notes)


COMMANDS = {
    "scan": cmd_scan,
    "poles": cmd_poles,
    "convergence": cmd_convergence,
    "disk-oracle": cmd_disk_oracle,
}

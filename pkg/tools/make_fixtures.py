"""Regenerate the files under fixtures/ from the catalog."""

from __future__ import annotations

import json
from pathlib import Path

from isolab import catalog
from isolab.files import model_doc, structure_to_data
from isolab.models import dumps
from isolab.theories import Presheaf, delta_nabla

ROOT = Path(__file__).resolve().parent.parent / "fixtures"


def write(name: str, doc: dict):
    (ROOT / name).write_text(dumps(doc), encoding="utf-8")


def main():
    ROOT.joinpath("data").mkdir(parents=True, exist_ok=True)
    z2 = catalog.cyclic_group(2)
    write("z2.model", model_doc("monoid", z2.as_monoid()))
    write("semilattice.model", model_doc("monoid", catalog.semilattice()))
    write("s3.model", model_doc("group", catalog.symmetric_group(3)))
    write("z4_cmonoid.model", model_doc("cmonoid", catalog.cyclic_group(4).as_monoid()))
    delta = delta_nabla(z2.as_monoid(), "discrete")
    write("delta_z2.model", model_doc("strmoncat", delta))
    write("nabla_t2.model", model_doc("strmoncat", delta_nabla(catalog.full_transformation_monoid(2), "indiscrete")))
    broken = model_doc("strmoncat", delta)
    broken["ops"]["I_A"] = [[[], "1>1"]]
    write("broken.model", broken)
    write("bz3_regular.model", model_doc("presheaf", catalog.presheaf_models("BZ3")[0]))
    write("chain3_inclusions.model", model_doc("presheaf", catalog.presheaf_models("chain3")[1]))
    write("mset_z2xsl2.model", model_doc("mset", catalog.mset_fixture()))
    write("crossed_z2_z4.model", model_doc("crossed", catalog.crossed_module_z2_z4()))
    write("ssmc_delta_z2.model", model_doc("ssmc", catalog.symmetric_fixtures()[0]))

    data = ROOT / "data"
    (data / "z2_monoid.json").write_text(json.dumps(structure_to_data("monoid", z2.as_monoid()), indent=1) + "\n")
    J = catalog.cyclic_category(2)
    swap = Presheaf(J, {"*": ("p", "q")}, {"0": {"p": "p", "q": "q"}, "1": {"p": "q", "q": "p"}}, "swap")
    (data / "bz2_swap.json").write_text(json.dumps(structure_to_data("presheaf", swap), indent=1) + "\n")
    bad = structure_to_data("monoid", z2.as_monoid())
    bad["table"] = [row for row in bad["table"] if row[0] != ["1", "1"]]
    (data / "bad_monoid.json").write_text(json.dumps(bad, indent=1) + "\n")
    (data / "bz2_index.json").write_text(json.dumps(structure_to_data("category", J), indent=1) + "\n")


if __name__ == "__main__":
    main()

"""The HTTP service end to end: serve a corpus, then act like the UI would.

Starts the API in-process on an ephemeral port, lists the review queue,
submits an annotation and a gate decision, walks an author's link
neighborhood, and fetches a rendered report whose bytes match the CLI.

Run:  python demos/03_serve_and_query.py
"""

import json
import tempfile
import threading
import urllib.parse
import urllib.request
from pathlib import Path

from litmon import CorpusStore
from litmon.api import make_server
from litmon.model import CurationStatus, EntityKind
from litmon.reports import build_report, render

# reuse the ingest demo's corpus builder inline: two records, one Ingested
from litmon import add_intrinsic, parse_bibtex

BIB = r"""
@article{served1,
  title = {Charting stiffness against density for bracket design},
  author = {Novak, J. and Silva, M.},
  journal = {Journal of Demonstrations}, year = {2020},
  doi = {10.9999/demo.2020.100}
}
@article{served2,
  title = {Another bracket paper awaiting curation},
  author = {Silva, M.},
  journal = {Journal of Demonstrations}, year = {2021}
}
"""

store = CorpusStore(year_min=1990, year_max=2026)
records, _ = parse_bibtex(BIB)
for intrinsic in records:
    add_intrinsic(store, intrinsic)

tmp = tempfile.mkdtemp()
corpus_path = str(Path(tmp) / "served.jsonl")
store.save(corpus_path)

server = make_server(store, "127.0.0.1", 0, corpus_path=corpus_path)
threading.Thread(target=server.serve_forever, daemon=True).start()
base = f"http://127.0.0.1:{server.server_address[1]}"
print(f"serving on {base}")


def get(path):
    with urllib.request.urlopen(base + path) as response:
        return json.loads(response.read())


def send(path, method, body):
    request = urllib.request.Request(
        base + path, data=json.dumps(body).encode(), method=method,
        headers={"Content-Type": "application/json"})
    with urllib.request.urlopen(request) as response:
        return json.loads(response.read())


# -- review queue: everything not yet validated/excluded ------------------------
queue = get("/records?status=ingested")
print(f"\nreview queue: {queue['payload']['count']} record(s)")
first = queue["payload"]["records"][0]["record_id"]

# -- annotate through the API, then gate ------------------------------------------
envelope = send(f"/records/{first}/annotation", "PUT", {
    "usage": {"principal_product": "Granta Selector",
              "flags": {"charts": True},
              "coupled_tools": ["SolidWorks"]},
    "application": {"raw_field_labels": ["mechanical engineering"]},
    "curator": "demo-ui",
})
print(f"annotated {first}: status={envelope['payload']['curation_status']} "
      f"snapshot={envelope['snapshot']}")

decision = send(f"/records/{first}/gate", "POST", {})
print(f"gate verdict: {decision['payload']['decision']['verdict']} "
      f"criteria={decision['payload']['decision']['satisfied_criteria']}")

validated = send(f"/records/{first}/validate", "POST", {})
print(f"promoted to {validated['payload']['curation_status']}")

# -- link explorer: one neighborhood request per expansion --------------------------
author = next(e for e in store.entities.values()
              if e.kind is EntityKind.AUTHOR and "silva" in e.canonical_key)
subgraph = get(f"/entities/{urllib.parse.quote(author.entity_id)}"
               "/neighborhood?depth=2")["payload"]
print(f"\nneighborhood of {author.display_name}: "
      f"{len(subgraph['nodes'])} nodes, {len(subgraph['links'])} links")
for node in subgraph["nodes"]:
    print(f"  {node['kind']:10} {node['label']}")

# -- reports: the API payload carries exactly the CLI bytes ---------------------------
api_content = get("/reports/dist?dim=product&format=table"
                  )["payload"]["content"]
validate_store = CorpusStore.load(corpus_path)
cli_bytes = render(build_report(validate_store, "dist",
                                {"dim": "product"}), "table")
assert api_content.encode() == cli_bytes
print(f"\nreport parity holds; product distribution:\n{api_content}")

server.shutdown()
print("done")

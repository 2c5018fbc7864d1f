#!/usr/bin/env python3
# Copyright 2026 The Phonaudit Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Converts panphon's ipa_all.csv into the bundled NFD feature TSV.

Usage: import_panphon.py <ipa_all.csv> <panphon-version> > data/panphon_features.tsv
"""

import csv
import sys
import unicodedata


def main(argv):
  if len(argv) != 3:
    sys.exit(__doc__)
  with open(argv[1], encoding="utf-8") as f:
    rows = list(csv.reader(f))
  header, body = rows[0], rows[1:]
  seen = {}
  for row in body:
    key = unicodedata.normalize("NFD", row[0])
    if key in seen and seen[key] != row[1:]:
      sys.exit(f"conflicting rows for {key!r} after NFD")
    seen[key] = row[1:]
  out = sys.stdout
  out.write(f"# source: panphon {argv[2]} ipa_all.csv (MIT License, "
            "David R. Mortensen et al.)\n")
  out.write("# keys: NFD; values: + present, - absent, 0 unspecified\n")
  out.write("\t".join(["phone"] + header[1:]) + "\n")
  for key in sorted(seen):
    out.write("\t".join([key] + seen[key]) + "\n")


if __name__ == "__main__":
  main(sys.argv)

#!/usr/bin/env python3
"""Runs an XQuery file against an XML document with Saxon-HE (saxonche).

usage: xquery_saxon.py QUERY_FILE DOCUMENT

The document node is the context item. Each item of the result is printed
on its own line as its string value.
"""
import sys

from saxonche import PySaxonProcessor


def main(argv):
    if len(argv) != 3:
        print(__doc__, file=sys.stderr)
        return 2
    query_file, document = argv[1], argv[2]
    with PySaxonProcessor(license=False) as proc:
        xq = proc.new_xquery_processor()
        doc = proc.parse_xml(xml_file_name=document)
        xq.set_context(xdm_item=doc)
        with open(query_file, encoding="utf-8") as f:
            xq.set_query_content(f.read())
        result = xq.run_query_to_value()
        if result is not None:
            for item in result:
                sys.stdout.write(item.string_value + "\n")
    return 0


if __name__ == "__main__":
    try:
        sys.exit(main(sys.argv))
    except Exception as e:  # saxon raises PySaxonApiError with the static/dynamic error
        print(f"xquery_saxon: {e}", file=sys.stderr)
        sys.exit(1)

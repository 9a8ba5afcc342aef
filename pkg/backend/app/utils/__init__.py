# Input documents and report payloads

"""Application layer: use cases that wire adapters, domain rules and presentation."""

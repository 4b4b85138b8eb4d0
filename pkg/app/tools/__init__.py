"""Command verbs, discovered by the tool registry."""

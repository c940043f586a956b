"""Subpackage with the verification suite and the report builders of the command-line interface."""

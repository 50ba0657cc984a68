"""Test package for knroots."""

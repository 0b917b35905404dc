"""Tests for Spanning-Tree Designs."""

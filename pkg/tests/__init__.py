# Tests for berezin-kit

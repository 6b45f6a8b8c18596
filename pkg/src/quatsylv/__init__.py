"""Quaternion Sylvester-type matrix equations."""

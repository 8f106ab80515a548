"""Pydantic schemas for run options, reports and exports."""

"""
Analysis services
"""

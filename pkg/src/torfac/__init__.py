"""Exact combinatorics of toric cobordisms: π-desingularization, factorization
into elementary blowups and blowdowns, and weight ideals of K*-actions."""

# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""DualTap - Sparse Adaptive Filtering Package"""

#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Utils module."""

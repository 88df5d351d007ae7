#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Table visualization tools Command Line Interface."""

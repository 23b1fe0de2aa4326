# Tests for User Registration API

# User Registration API

# Integration tests - API endpoints and database operations

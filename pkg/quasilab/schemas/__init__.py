# Pydantic schemas for every JSON document the lab reads or writes
